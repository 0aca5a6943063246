#include "lolrec/slope_one.hpp"

#include <algorithm>

#include "lolrec/errors.hpp"
#include "lolrec/svd.hpp"

namespace lolrec {

SlopeOneModel train_slope_one(const Dataset& dataset) {
    SlopeOneModel model;
    model.items = dataset.items;
    const std::size_t n = model.items.size();
    model.dev.assign(n * n, 0.0);
    model.counts.assign(n * n, 0);

    // Per-user item lists in dense space.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> by_user(dataset.users.size());
    for (const auto& triple : dataset.triples) {
        by_user[*dataset.users.find(triple.player_id)].emplace_back(
            *dataset.items.find(triple.champion_id), static_cast<double>(triple.rating));
    }

    for (const auto& ratings : by_user) {
        for (std::size_t a = 0; a < ratings.size(); ++a) {
            for (std::size_t b = a + 1; b < ratings.size(); ++b) {
                const auto [i, ri] = ratings[a];
                const auto [j, rj] = ratings[b];
                model.dev[i * n + j] += ri - rj;
                model.dev[j * n + i] += rj - ri;
                model.counts[i * n + j]++;
                model.counts[j * n + i]++;
            }
        }
    }
    for (std::size_t cell = 0; cell < n * n; ++cell) {
        if (model.counts[cell] > 0) model.dev[cell] /= model.counts[cell];
    }
    return model;
}

double predict_slope_one(const SlopeOneModel& model, std::span<const ProfileEntry> profile,
                         std::int32_t champion_id, bool weighted) {
    if (profile.empty()) throw DataError("empty profile");
    const auto target = model.items.find(champion_id);
    if (!target) throw ModelError("unknown champion " + std::to_string(champion_id));

    const std::size_t n = model.n_items();
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& entry : profile) {
        const auto j = model.items.find(entry.champion_id);
        if (!j || *j == *target) continue;
        const auto c = model.counts[*target * n + *j];
        if (c == 0) continue;
        const double weight = weighted ? static_cast<double>(c) : 1.0;
        numerator += weight * (entry.rating + model.dev[*target * n + *j]);
        denominator += weight;
    }

    double estimate;
    if (denominator > 0.0) {
        estimate = numerator / denominator;
    } else {
        // Nothing co-rated with the target: fall back to the profile mean.
        double sum = 0.0;
        for (const auto& entry : profile) sum += entry.rating;
        estimate = sum / static_cast<double>(profile.size());
    }
    return std::clamp(estimate, FactorModel::kMinRating, FactorModel::kMaxRating);
}

}  // namespace lolrec
