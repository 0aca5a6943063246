#include "lolrec/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string_view>
#include <unordered_set>

#include "io_util.hpp"
#include "lolrec/errors.hpp"
#include "lolrec/rng.hpp"

namespace lolrec {

namespace {

constexpr std::string_view kDatasetHeader = "player_id,champion_id,cmp";
constexpr std::string_view kCatalogHeader = "champion_id,name";

// Iterates LF-separated lines, tolerating a trailing CR per line and a
// missing final newline.
class LineReader {
public:
    explicit LineReader(std::string_view content) : rest_(content) {}

    std::optional<std::string_view> next() {
        if (rest_.empty()) return std::nullopt;
        const auto pos = rest_.find('\n');
        std::string_view line = pos == std::string_view::npos ? rest_ : rest_.substr(0, pos);
        rest_ = pos == std::string_view::npos ? std::string_view{} : rest_.substr(pos + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_number_;
        return line;
    }

    std::size_t line_number() const noexcept { return line_number_; }

private:
    std::string_view rest_;
    std::size_t line_number_ = 0;
};

template <class Int>
Int parse_non_negative(std::string_view field, const std::filesystem::path& path,
                       std::size_t line, std::string_view what) {
    Int value{};
    const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
    if (result.ec != std::errc{} || result.ptr != field.data() + field.size() || value < 0) {
        throw DataError(path.string() + ":" + std::to_string(line) + ": malformed " +
                        std::string(what) + " '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::vector<MasteryRecord> load_csv(const std::filesystem::path& path) {
    const auto content = detail::read_file(path);
    if (!content) throw DataError("cannot open dataset file '" + path.string() + "'");

    LineReader reader(*content);
    const auto header = reader.next();
    if (!header || *header != kDatasetHeader) {
        throw DataError(path.string() + ":1: expected header '" + std::string(kDatasetHeader) + "'");
    }

    std::vector<MasteryRecord> records;
    std::unordered_map<std::string, std::unordered_set<std::int32_t>> seen;
    while (const auto line = reader.next()) {
        if (line->empty()) continue;
        const auto first = line->find(',');
        const auto second = first == std::string_view::npos ? first : line->find(',', first + 1);
        if (second == std::string_view::npos || line->find(',', second + 1) != std::string_view::npos) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) +
                            ": malformed row, expected 3 fields");
        }
        MasteryRecord record;
        record.player_id = std::string(line->substr(0, first));
        if (record.player_id.empty()) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) +
                            ": empty player_id");
        }
        record.champion_id = parse_non_negative<std::int32_t>(
            line->substr(first + 1, second - first - 1), path, reader.line_number(), "champion_id");
        record.cmp = parse_non_negative<std::int64_t>(line->substr(second + 1), path,
                                                      reader.line_number(), "cmp");
        if (!seen[record.player_id].insert(record.champion_id).second) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) +
                            ": duplicate (player, champion) pair ('" + record.player_id + "', " +
                            std::to_string(record.champion_id) + ")");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string records_to_csv(const std::vector<MasteryRecord>& records) {
    std::string out(kDatasetHeader);
    out.push_back('\n');
    for (const auto& record : records) {
        out += record.player_id;
        out.push_back(',');
        out += std::to_string(record.champion_id);
        out.push_back(',');
        out += std::to_string(record.cmp);
        out.push_back('\n');
    }
    return out;
}

void save_csv(const std::vector<MasteryRecord>& records, const std::filesystem::path& path) {
    for (const auto& record : records) {
        if (record.player_id.empty() || record.player_id.find(',') != std::string::npos ||
            record.player_id.find('\n') != std::string::npos) {
            throw DataError("player_id '" + record.player_id + "' cannot be stored in CSV");
        }
        if (record.champion_id < 0 || record.cmp < 0) {
            throw DataError("negative fields for player '" + record.player_id + "'");
        }
    }
    detail::write_file_atomic(path, records_to_csv(records));
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    detail::write_file_atomic(path, content);
}

std::vector<double> load_value_column(const std::filesystem::path& path) {
    const auto content = detail::read_file(path);
    if (!content) throw DataError("cannot open value file '" + path.string() + "'");

    LineReader reader(*content);
    std::vector<double> values;
    while (const auto line = reader.next()) {
        if (line->empty()) continue;
        if (reader.line_number() == 1 && *line == "value") continue;
        const std::string text(*line);
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || text.empty()) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) +
                            ": malformed value '" + text + "'");
        }
        values.push_back(value);
    }
    return values;
}

void ChampionCatalog::add(std::int32_t champion_id, std::string name) {
    if (name.empty()) throw DataError("empty champion name for id " + std::to_string(champion_id));
    if (!by_id_.try_emplace(champion_id, entries_.size()).second) {
        throw DataError("duplicate champion id " + std::to_string(champion_id));
    }
    entries_.emplace_back(champion_id, std::move(name));
}

std::optional<std::string> ChampionCatalog::find(std::int32_t champion_id) const {
    const auto it = by_id_.find(champion_id);
    if (it == by_id_.end()) return std::nullopt;
    return entries_[it->second].second;
}

std::string ChampionCatalog::display_name(std::int32_t champion_id) const {
    if (auto name = find(champion_id)) return *name;
    return "#" + std::to_string(champion_id);
}

ChampionCatalog load_catalog(const std::filesystem::path& path) {
    const auto content = detail::read_file(path);
    if (!content) throw DataError("cannot open catalog file '" + path.string() + "'");

    LineReader reader(*content);
    const auto header = reader.next();
    if (!header || *header != kCatalogHeader) {
        throw DataError(path.string() + ":1: expected header '" + std::string(kCatalogHeader) + "'");
    }

    ChampionCatalog catalog;
    while (const auto line = reader.next()) {
        if (line->empty()) continue;
        const auto comma = line->find(',');
        if (comma == std::string_view::npos) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) +
                            ": malformed row, expected 2 fields");
        }
        const auto id = parse_non_negative<std::int32_t>(line->substr(0, comma), path,
                                                         reader.line_number(), "champion_id");
        try {
            catalog.add(id, std::string(line->substr(comma + 1)));
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(reader.line_number()) + ": " +
                            e.what());
        }
    }
    return catalog;
}

std::vector<MasteryRecord> generate_synthetic(const SynthConfig& config) {
    if (config.n_users == 0) throw DataError("synthetic population needs n_users > 0");
    if (config.archetypes.empty()) throw DataError("synthetic population needs at least one archetype");
    for (const auto& archetype : config.archetypes) {
        if (archetype.pool.empty()) throw DataError("archetype pool must be non-empty");
        if (archetype.pool.size() != archetype.intensity.size()) {
            throw DataError("archetype pool and intensity sizes differ");
        }
        std::unordered_set<std::int32_t> unique(archetype.pool.begin(), archetype.pool.end());
        if (unique.size() != archetype.pool.size()) {
            throw DataError("archetype pool contains duplicate champions");
        }
        for (const double intensity : archetype.intensity) {
            if (!(intensity > 0.0)) throw DataError("archetype intensity must be > 0");
        }
    }
    if (!(config.activity_sigma >= 0.0)) throw DataError("activity_sigma must be >= 0");

    Rng rng(config.seed);
    std::vector<MasteryRecord> records;
    char player_buffer[32];
    for (std::size_t user = 0; user < config.n_users; ++user) {
        std::snprintf(player_buffer, sizeof(player_buffer), "u%06zu", user);
        const std::string player_id(player_buffer);
        const auto& archetype = config.archetypes[rng.below(config.archetypes.size())];
        const double activity = std::exp(rng.normal(config.activity_mu, config.activity_sigma));
        for (std::size_t slot = 0; slot < archetype.pool.size(); ++slot) {
            const auto cmp = rng.poisson(activity * archetype.intensity[slot]);
            if (cmp == 0) continue;
            records.push_back({player_id, archetype.pool[slot], static_cast<std::int64_t>(cmp)});
        }
    }
    return records;
}

}  // namespace lolrec
