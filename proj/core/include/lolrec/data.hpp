#ifndef LOLREC_DATA_HPP
#define LOLREC_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lolrec/ratings.hpp"

namespace lolrec {

// Dataset CSV persistence. Schema: header `player_id,champion_id,cmp`,
// UTF-8, LF line endings. Loading validates every row and reports the
// offending line number; duplicate (player, champion) pairs are rejected.
std::vector<MasteryRecord> load_csv(const std::filesystem::path& path);
void save_csv(const std::vector<MasteryRecord>& records, const std::filesystem::path& path);
std::string records_to_csv(const std::vector<MasteryRecord>& records);

// Atomic text-file write (temp file + rename): failed writes never leave a
// partial file behind.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Single-column numeric file: one value per line, optional `value` header,
// blank lines ignored. Errors name the offending line.
std::vector<double> load_value_column(const std::filesystem::path& path);

// champion_id -> display name lookup.
class ChampionCatalog {
public:
    void add(std::int32_t champion_id, std::string name);
    std::optional<std::string> find(std::int32_t champion_id) const;
    // Resolved name, or "#<id>" for champions missing from the catalog.
    std::string display_name(std::int32_t champion_id) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<std::pair<std::int32_t, std::string>>& entries() const noexcept {
        return entries_;
    }

private:
    std::vector<std::pair<std::int32_t, std::string>> entries_;
    std::unordered_map<std::int32_t, std::size_t> by_id_;
};

// Catalog CSV: header `champion_id,name`. Duplicate ids and empty names
// are rejected; a missing file raises an error naming the path.
ChampionCatalog load_catalog(const std::filesystem::path& path);

// One synthetic player archetype: the champions its players engage with
// and the expected play volume for each.
struct Archetype {
    std::vector<std::int32_t> pool;
    std::vector<double> intensity;  // per pool entry, > 0
};

// Synthetic population: every user is assigned one archetype, draws an
// activity factor from LogNormal(activity_mu, activity_sigma), and then a
// cmp value per pool champion from Poisson(activity * intensity). Zero
// draws are omitted, mirroring how absent champions never produce rows.
struct SynthConfig {
    std::size_t n_users = 0;
    std::vector<Archetype> archetypes;
    double activity_mu = 0.0;
    double activity_sigma = 0.5;
    std::uint64_t seed = 0;
};

std::vector<MasteryRecord> generate_synthetic(const SynthConfig& config);

}  // namespace lolrec

#endif  // LOLREC_DATA_HPP
