#include "lolrec/recommend.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lolrec/errors.hpp"

namespace lolrec {

namespace {

void sort_and_truncate(RecommendationList& list) {
    std::sort(list.items.begin(), list.items.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.champion_id < b.champion_id;
    });
    if (list.items.size() > static_cast<std::size_t>(list.k)) list.items.resize(list.k);
}

std::unordered_set<std::int32_t> profile_champions(const QueryProfile& profile) {
    std::unordered_set<std::int32_t> ids;
    for (const auto& entry : profile.entries) ids.insert(entry.champion_id);
    return ids;
}

}  // namespace

QueryProfile top_champions(const std::vector<MasteryRecord>& records, int n) {
    if (n < 1) throw DataError("profile size must be >= 1");

    std::vector<MasteryRecord> played;
    for (const auto& record : records) {
        if (!played.empty() && record.player_id != played.front().player_id) {
            throw DataError("records span multiple players: '" + played.front().player_id +
                            "' and '" + record.player_id + "'");
        }
        if (record.cmp > 0) played.push_back(record);
    }
    if (played.empty() && !records.empty()) {
        // All rows were zero; keep the id for the error message.
        throw DataError("no mastery data for player '" + records.front().player_id + "'");
    }
    if (played.empty()) throw DataError("no mastery data");

    std::sort(played.begin(), played.end(), [](const MasteryRecord& a, const MasteryRecord& b) {
        if (a.cmp != b.cmp) return a.cmp > b.cmp;
        return a.champion_id < b.champion_id;
    });
    if (played.size() > static_cast<std::size_t>(n)) played.resize(n);

    QueryProfile profile;
    profile.player_id = played.front().player_id;
    for (const auto& triple : normalize_user(played)) {
        profile.entries.push_back({triple.champion_id, static_cast<double>(triple.rating)});
    }
    std::sort(profile.entries.begin(), profile.entries.end(),
              [](const ProfileEntry& a, const ProfileEntry& b) {
                  if (a.rating != b.rating) return a.rating > b.rating;
                  return a.champion_id < b.champion_id;
              });
    return profile;
}

RecommendationList rank_unrated(const FactorModel& model, const QueryProfile& profile, int k) {
    if (k < 1) throw DataError("k must be >= 1");

    std::vector<ProfileEntry> known;
    for (const auto& entry : profile.entries) {
        if (model.items.find(entry.champion_id)) known.push_back(entry);
    }
    if (known.empty()) {
        throw ModelError("none of the profile champions are known to the model");
    }
    const auto user_vector = fold_in(model, known);

    const auto excluded = profile_champions(profile);
    RecommendationList list;
    list.player_id = profile.player_id;
    list.k = k;
    for (std::uint32_t dense = 0; dense < model.items.size(); ++dense) {
        const auto champion_id = model.items.key_of(dense);
        if (excluded.contains(champion_id)) continue;
        list.items.push_back({champion_id, predict(model, user_vector, champion_id)});
    }
    sort_and_truncate(list);
    return list;
}

RecommendationList rank_unrated(const SlopeOneModel& model, const QueryProfile& profile, int k,
                                bool weighted) {
    if (k < 1) throw DataError("k must be >= 1");
    if (profile.entries.empty()) throw DataError("empty profile");

    const auto excluded = profile_champions(profile);
    RecommendationList list;
    list.player_id = profile.player_id;
    list.k = k;
    for (std::uint32_t dense = 0; dense < model.items.size(); ++dense) {
        const auto champion_id = model.items.key_of(dense);
        if (excluded.contains(champion_id)) continue;
        list.items.push_back(
            {champion_id, predict_slope_one(model, profile.entries, champion_id, weighted)});
    }
    sort_and_truncate(list);
    return list;
}

RecommendationList recommend(const FactorModel& model, const std::vector<MasteryRecord>& records,
                             int k) {
    if (k < 1) throw DataError("k must be >= 1");
    return rank_unrated(model, top_champions(records), k);
}

RenderedRecommendations format_recommendations(const RecommendationList& list,
                                               const ChampionCatalog& catalog,
                                               DocumentFormat format,
                                               std::string_view generated_at) {
    RenderedRecommendations rendered;
    for (const auto& item : list.items) {
        if (!catalog.find(item.champion_id)) {
            rendered.warnings.push_back("champion " + std::to_string(item.champion_id) +
                                        " is not in the catalog");
        }
    }

    if (format == DocumentFormat::json) {
        nlohmann::ordered_json doc;
        doc["player"] = list.player_id;
        doc["generated_at"] = std::string(generated_at);
        doc["items"] = nlohmann::ordered_json::array();
        for (const auto& item : list.items) {
            doc["items"].push_back({{"champion_id", item.champion_id},
                                    {"name", catalog.display_name(item.champion_id)},
                                    {"score", item.score}});
        }
        rendered.body = doc.dump(2);
        rendered.body.push_back('\n');
        return rendered;
    }

    std::string& out = rendered.body;
    out += "Recommendations for " + list.player_id + " (generated " + std::string(generated_at) +
           ")\n";
    std::size_t rank = 1;
    for (const auto& item : list.items) {
        char score_text[32];
        std::snprintf(score_text, sizeof(score_text), "%.2f", item.score);
        out += "  " + std::to_string(rank++) + ". " + catalog.display_name(item.champion_id) +
               " (" + std::to_string(item.champion_id) + ")  " + score_text + "\n";
    }
    if (list.items.empty()) out += "  (no candidates)\n";
    return rendered;
}

}  // namespace lolrec
