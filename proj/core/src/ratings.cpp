#include "lolrec/ratings.hpp"

#include <algorithm>
#include <unordered_set>

#include "lolrec/errors.hpp"

namespace lolrec {

std::vector<RatingTriple> normalize_user(const std::vector<MasteryRecord>& records) {
    if (records.empty()) throw DataError("no mastery data");

    const std::string& player = records.front().player_id;
    std::int64_t max_cmp = 0;
    for (const auto& record : records) {
        if (record.player_id != player) {
            throw DataError("normalize_user requires records of a single player; got '" +
                            player + "' and '" + record.player_id + "'");
        }
        if (record.cmp <= 0) {
            throw DataError("non-positive mastery points for champion " +
                            std::to_string(record.champion_id) +
                            "; filter zero rows before normalizing");
        }
        max_cmp = std::max(max_cmp, record.cmp);
    }

    std::vector<RatingTriple> triples;
    triples.reserve(records.size());
    for (const auto& record : records) {
        // Integer ceiling of 100 * cmp / max_cmp; the maximum maps to 100.
        const std::int64_t rating = (100 * record.cmp + max_cmp - 1) / max_cmp;
        triples.push_back({record.player_id, record.champion_id, static_cast<int>(rating)});
    }
    return triples;
}

Dataset build_training_set(const std::vector<MasteryRecord>& records) {
    // Group positive-cmp rows per player, preserving first-seen player order
    // and the input order of each player's rows.
    std::vector<std::string> player_order;
    std::unordered_map<std::string, std::vector<MasteryRecord>> by_player;
    for (const auto& record : records) {
        if (record.cmp < 0) {
            throw DataError("negative mastery points for player '" + record.player_id + "'");
        }
        if (record.champion_id < 0) {
            throw DataError("negative champion id for player '" + record.player_id + "'");
        }
        if (record.cmp == 0) continue;  // absence of evidence, not a rating
        auto [it, inserted] = by_player.try_emplace(record.player_id);
        if (inserted) player_order.push_back(record.player_id);
        for (const auto& existing : it->second) {
            if (existing.champion_id == record.champion_id) {
                throw DataError("duplicate (player, champion) pair: ('" + record.player_id +
                                "', " + std::to_string(record.champion_id) + ")");
            }
        }
        it->second.push_back(record);
    }
    if (player_order.empty()) throw DataError("no usable mastery records (all rows empty or cmp = 0)");

    Dataset dataset;
    for (const auto& player : player_order) {
        for (auto& triple : normalize_user(by_player.at(player))) {
            dataset.users.add(triple.player_id);
            dataset.items.add(triple.champion_id);
            dataset.triples.push_back(std::move(triple));
        }
    }
    return dataset;
}

Dataset dataset_from_triples(std::vector<RatingTriple> triples) {
    if (triples.empty()) throw DataError("cannot build a dataset from zero triples");

    Dataset dataset;
    std::unordered_map<std::string, std::unordered_set<std::int32_t>> seen;
    for (const auto& triple : triples) {
        if (triple.rating < 1 || triple.rating > 100) {
            throw DataError("rating out of range [1, 100]: " + std::to_string(triple.rating));
        }
        if (!seen[triple.player_id].insert(triple.champion_id).second) {
            throw DataError("duplicate (player, champion) pair: ('" + triple.player_id + "', " +
                            std::to_string(triple.champion_id) + ")");
        }
        dataset.users.add(triple.player_id);
        dataset.items.add(triple.champion_id);
    }
    dataset.triples = std::move(triples);
    return dataset;
}

DatasetStats dataset_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.n_users = dataset.users.size();
    stats.n_items = dataset.items.size();
    stats.n_rows = dataset.triples.size();
    stats.mean_rows_per_user =
        stats.n_users == 0 ? 0.0 : static_cast<double>(stats.n_rows) / static_cast<double>(stats.n_users);
    for (const auto& triple : dataset.triples) {
        stats.rating_counts[static_cast<std::size_t>(triple.rating - 1)]++;
    }
    return stats;
}

std::vector<DenseRating> dense_ratings(const Dataset& dataset) {
    std::vector<DenseRating> dense;
    dense.reserve(dataset.triples.size());
    for (const auto& triple : dataset.triples) {
        dense.push_back({*dataset.users.find(triple.player_id),
                         *dataset.items.find(triple.champion_id),
                         static_cast<double>(triple.rating)});
    }
    return dense;
}

}  // namespace lolrec
