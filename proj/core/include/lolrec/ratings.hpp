#ifndef LOLREC_RATINGS_HPP
#define LOLREC_RATINGS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lolrec {

// Raw (player, champion, mastery points) triple as ingested from the game
// API or from CSV. Mastery points never decrease and are unbounded above.
struct MasteryRecord {
    std::string player_id;
    std::int32_t champion_id = 0;
    std::int64_t cmp = 0;  // champion mastery points, >= 0

    bool operator==(const MasteryRecord&) const = default;
};

// Normalized training row. rating lies in [1, 100]; each player's
// most-played champion maps to exactly 100.
struct RatingTriple {
    std::string player_id;
    std::int32_t champion_id = 0;
    int rating = 0;

    bool operator==(const RatingTriple&) const = default;
};

// One (champion, rating) pair of a query profile. Ratings are on the same
// 1-100 scale as training rows but are carried as doubles so evaluation
// code can pass predicted values through the same interfaces.
struct ProfileEntry {
    std::int32_t champion_id = 0;
    double rating = 0.0;

    bool operator==(const ProfileEntry&) const = default;
};

// Dense bijection key <-> index, indices assigned in first-seen order.
template <class Key>
class IndexMap {
public:
    std::uint32_t add(const Key& key) {
        auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
        if (inserted) keys_.push_back(key);
        return it->second;
    }

    std::optional<std::uint32_t> find(const Key& key) const {
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const Key& key_of(std::uint32_t dense) const { return keys_.at(dense); }
    std::size_t size() const noexcept { return keys_.size(); }
    const std::vector<Key>& keys() const noexcept { return keys_; }

    bool operator==(const IndexMap& other) const { return keys_ == other.keys_; }

private:
    std::vector<Key> keys_;
    std::unordered_map<Key, std::uint32_t> index_;
};

// Rating triple expressed in dense indices, the form the trainer consumes.
struct DenseRating {
    std::uint32_t user = 0;
    std::uint32_t item = 0;
    double rating = 0.0;
};

// Fully indexed training set: normalized triples plus the dense id
// mappings assigned in first-seen order. Immutable after construction and
// safe to share read-only across threads.
struct Dataset {
    std::vector<RatingTriple> triples;
    IndexMap<std::string> users;
    IndexMap<std::int32_t> items;

    bool operator==(const Dataset& other) const {
        return triples == other.triples && users == other.users && items == other.items;
    }
};

// Converts one player's positive-cmp records to 1-100 ratings:
// rating = ceil(100 * cmp / max_cmp). Output order matches input order and
// the max-cmp record maps to exactly 100.
// Throws DataError on empty input, mixed players, or any cmp <= 0.
std::vector<RatingTriple> normalize_user(const std::vector<MasteryRecord>& records);

// Drops cmp == 0 rows, normalizes per player, and assembles the indexed
// Dataset. Throws DataError when nothing usable remains or on duplicate
// (player, champion) pairs.
Dataset build_training_set(const std::vector<MasteryRecord>& records);

// Assembles a Dataset from already-normalized triples (used by the
// cross-validation splitter and by tests). Validates rating range and
// duplicate pairs; does not require a per-player maximum of 100.
Dataset dataset_from_triples(std::vector<RatingTriple> triples);

struct DatasetStats {
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    std::size_t n_rows = 0;
    double mean_rows_per_user = 0.0;
    std::array<std::size_t, 100> rating_counts{};  // index = rating - 1
};

DatasetStats dataset_stats(const Dataset& dataset);

// Dense view of the triples, mapped through the dataset's own indices.
std::vector<DenseRating> dense_ratings(const Dataset& dataset);

}  // namespace lolrec

#endif  // LOLREC_RATINGS_HPP
