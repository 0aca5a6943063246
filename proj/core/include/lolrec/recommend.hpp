#ifndef LOLREC_RECOMMEND_HPP
#define LOLREC_RECOMMEND_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lolrec/data.hpp"
#include "lolrec/ratings.hpp"
#include "lolrec/slope_one.hpp"
#include "lolrec/svd.hpp"

namespace lolrec {

// Queried player's rating vector: up to five (champion, rating) pairs
// sorted by rating descending, the top entry rated exactly 100.
struct QueryProfile {
    std::string player_id;
    std::vector<ProfileEntry> entries;
};

// Selects the n highest-cmp champions (ties by champion_id ascending) and
// normalizes that subset so its maximum maps to 100. Throws DataError when
// the player has no positive-cmp records.
QueryProfile top_champions(const std::vector<MasteryRecord>& records, int n = 5);

struct ScoredItem {
    std::int32_t champion_id = 0;
    double score = 0.0;

    bool operator==(const ScoredItem&) const = default;
};

// Ordered by predicted rating descending, ties by champion_id ascending;
// never contains a champion from the query profile.
struct RecommendationList {
    std::string player_id;
    int k = 0;
    std::vector<ScoredItem> items;
};

// Scores every model champion outside the profile and keeps the top k.
// The factor-model variant folds the profile in first; profile champions
// unknown to the model are excluded from the fold-in but still never
// recommended.
RecommendationList rank_unrated(const FactorModel& model, const QueryProfile& profile, int k);
RecommendationList rank_unrated(const SlopeOneModel& model, const QueryProfile& profile, int k,
                                bool weighted = true);

// End-to-end query: top-5 profile from the player's mastery snapshot,
// fold-in, score all other champions, return the top k.
RecommendationList recommend(const FactorModel& model, const std::vector<MasteryRecord>& records,
                             int k = 5);

enum class DocumentFormat { text, json };

struct RenderedRecommendations {
    std::string body;
    std::vector<std::string> warnings;  // champions missing from the catalog
};

// Renders a recommendation list. Unresolvable champions render as "#<id>"
// and produce a warning rather than an error. Output is byte-stable given
// the same inputs; callers inject generated_at so tests can pin it.
RenderedRecommendations format_recommendations(const RecommendationList& list,
                                               const ChampionCatalog& catalog,
                                               DocumentFormat format,
                                               std::string_view generated_at);

}  // namespace lolrec

#endif  // LOLREC_RECOMMEND_HPP
