#include "lolrec/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "lolrec/errors.hpp"
#include "lolrec/rng.hpp"

namespace lolrec {

double rmse(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size()) {
        throw DataError("rmse requires equal-length inputs (" + std::to_string(predictions.size()) +
                        " vs " + std::to_string(truths.size()) + ")");
    }
    if (predictions.empty()) throw DataError("rmse over zero values is undefined");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double err = predictions[i] - truths[i];
        sum += err * err;
    }
    return std::sqrt(sum / static_cast<double>(predictions.size()));
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, int folds, std::uint64_t seed) {
    if (folds < 2) throw DataError("folds must be >= 2");
    if (static_cast<std::size_t>(folds) > n) {
        throw DataError("degenerate partition: " + std::to_string(folds) + " folds over " +
                        std::to_string(n) + " rows");
    }
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(indices);

    std::vector<std::vector<std::size_t>> partition(folds);
    const std::size_t base = n / folds;
    const std::size_t extra = n % folds;
    std::size_t offset = 0;
    for (int fold = 0; fold < folds; ++fold) {
        const std::size_t size = base + (static_cast<std::size_t>(fold) < extra ? 1 : 0);
        partition[fold].assign(indices.begin() + offset, indices.begin() + offset + size);
        offset += size;
    }
    return partition;
}

CvResult kfold_cv(const Dataset& dataset, const Hyperparams& hyperparams, int folds,
                  std::uint64_t seed) {
    hyperparams.validate();
    const auto partition = kfold_partition(dataset.triples.size(), folds, seed);

    CvResult result;
    for (const auto& test_indices : partition) {
        std::vector<bool> in_test(dataset.triples.size(), false);
        for (const auto index : test_indices) in_test[index] = true;

        std::vector<RatingTriple> train_triples;
        train_triples.reserve(dataset.triples.size() - test_indices.size());
        for (std::size_t i = 0; i < dataset.triples.size(); ++i) {
            if (!in_test[i]) train_triples.push_back(dataset.triples[i]);
        }
        const auto train_set = dataset_from_triples(std::move(train_triples));
        const auto trained = train(train_set, hyperparams);

        CvFold fold;
        std::vector<double> predictions;
        std::vector<double> truths;
        for (const auto index : test_indices) {
            const auto& triple = dataset.triples[index];
            const auto user = train_set.users.find(triple.player_id);
            const auto item = trained.model.items.find(triple.champion_id);
            if (!user || !item) {
                ++fold.skipped;
                continue;
            }
            predictions.push_back(
                predict(trained.model, trained.model.user_row(*user), triple.champion_id));
            truths.push_back(static_cast<double>(triple.rating));
        }
        if (predictions.empty()) {
            throw DataError("degenerate fold: no evaluable held-out rows");
        }
        fold.evaluated = predictions.size();
        fold.rmse = rmse(predictions, truths);
        result.evaluated += fold.evaluated;
        result.skipped += fold.skipped;
        result.folds.push_back(fold);
    }

    double sum = 0.0;
    for (const auto& fold : result.folds) sum += fold.rmse;
    result.mean_rmse = sum / static_cast<double>(result.folds.size());
    return result;
}

GridSearchResult grid_search(const Dataset& dataset, const Hyperparams& base,
                             const HyperGrid& grid, int folds, std::uint64_t seed,
                             unsigned jobs) {
    if (grid.epochs_values.empty() || grid.lambda_values.empty() || grid.gamma_values.empty()) {
        throw DataError("grid must have at least one candidate per hyperparameter");
    }

    std::vector<GridPoint> table;
    for (const int epochs : grid.epochs_values) {
        for (const double lambda : grid.lambda_values) {
            for (const double gamma : grid.gamma_values) {
                GridPoint point;
                point.epochs = epochs;
                point.lambda = lambda;
                point.gamma = gamma;
                table.push_back(point);
            }
        }
    }

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(table.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= table.size()) return;
            try {
                auto& point = table[index];
                Hyperparams h = base;
                h.epochs = point.epochs;
                h.lambda = point.lambda;
                h.gamma = point.gamma;
                point.cv = kfold_cv(dataset, h, folds, seed);
                point.mean_rmse = point.cv.mean_rmse;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t best_index = 0;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i].mean_rmse < table[best_index].mean_rmse) best_index = i;
    }

    GridSearchResult result;
    result.best = base;
    result.best.epochs = table[best_index].epochs;
    result.best.lambda = table[best_index].lambda;
    result.best.gamma = table[best_index].gamma;
    result.best_rmse = table[best_index].mean_rmse;
    result.table = std::move(table);
    return result;
}

double popularity_share(const std::vector<RecommendationList>& recommendations,
                        const Dataset& dataset, double decile) {
    if (recommendations.empty()) throw DataError("empty recommendation cohort");
    if (!(decile > 0.0 && decile <= 1.0)) throw DataError("decile must lie in (0, 1]");

    const std::size_t n_items = dataset.items.size();
    std::vector<std::size_t> counts(n_items, 0);
    for (const auto& triple : dataset.triples) counts[*dataset.items.find(triple.champion_id)]++;

    std::vector<std::uint32_t> ranked(n_items);
    std::iota(ranked.begin(), ranked.end(), 0u);
    std::sort(ranked.begin(), ranked.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        return dataset.items.key_of(a) < dataset.items.key_of(b);
    });

    const auto top_size = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(decile * static_cast<double>(n_items))), 1, n_items);
    std::unordered_set<std::int32_t> top_champions;
    for (std::size_t i = 0; i < top_size; ++i) top_champions.insert(dataset.items.key_of(ranked[i]));

    std::size_t slots = 0;
    std::size_t popular = 0;
    for (const auto& list : recommendations) {
        for (const auto& item : list.items) {
            ++slots;
            if (top_champions.contains(item.champion_id)) ++popular;
        }
    }
    if (slots == 0) throw DataError("recommendation cohort has no slots");
    return static_cast<double>(popular) / static_cast<double>(slots);
}

HitRateResult hit_rate_at_k(const FactorModel& model, const Dataset& dataset, int k,
                            std::uint64_t seed, std::size_t max_users) {
    if (k < 1) throw DataError("k must be >= 1");

    // Per-user rating lists in dense user order.
    std::vector<std::vector<ProfileEntry>> by_user(dataset.users.size());
    for (const auto& triple : dataset.triples) {
        by_user[*dataset.users.find(triple.player_id)].push_back(
            {triple.champion_id, static_cast<double>(triple.rating)});
    }

    std::vector<std::uint32_t> eligible;
    for (std::uint32_t user = 0; user < by_user.size(); ++user) {
        if (by_user[user].size() >= 2) eligible.push_back(user);
    }
    if (eligible.empty()) throw DataError("no users with >= 2 rated items");

    Rng rng(seed);
    if (max_users > 0 && eligible.size() > max_users) {
        rng.shuffle(eligible);
        eligible.resize(max_users);
    }

    HitRateResult result;
    double expected_sum = 0.0;
    for (const auto user : eligible) {
        auto ratings = by_user[user];
        std::sort(ratings.begin(), ratings.end(), [](const ProfileEntry& a, const ProfileEntry& b) {
            if (a.rating != b.rating) return a.rating > b.rating;
            return a.champion_id < b.champion_id;
        });
        const ProfileEntry hidden = ratings.front();

        std::vector<ProfileEntry> profile;
        for (std::size_t i = 1; i < ratings.size() && profile.size() < 5; ++i) {
            if (model.items.find(ratings[i].champion_id)) profile.push_back(ratings[i]);
        }
        if (profile.empty()) continue;
        const auto hidden_dense = model.items.find(hidden.champion_id);
        if (!hidden_dense) continue;

        const auto user_vector = fold_in(model, profile);

        std::unordered_set<std::int32_t> in_profile;
        for (const auto& entry : profile) in_profile.insert(entry.champion_id);

        const double hidden_score = predict(model, user_vector, hidden.champion_id);
        std::size_t candidates = 0;
        std::size_t better = 0;
        for (std::uint32_t dense = 0; dense < model.items.size(); ++dense) {
            const auto champion_id = model.items.key_of(dense);
            if (in_profile.contains(champion_id)) continue;
            ++candidates;
            if (champion_id == hidden.champion_id) continue;
            const double score = predict(model, user_vector, champion_id);
            if (score > hidden_score || (score == hidden_score && champion_id < hidden.champion_id)) {
                ++better;
            }
        }
        ++result.trials;
        if (better < static_cast<std::size_t>(k)) ++result.hits;
        expected_sum += std::min<double>(k, static_cast<double>(candidates)) /
                        static_cast<double>(candidates);
    }
    if (result.trials == 0) throw DataError("no evaluable leave-one-out trials");
    result.hit_rate = static_cast<double>(result.hits) / static_cast<double>(result.trials);
    result.expected_random = expected_sum / static_cast<double>(result.trials);
    return result;
}

HitRateResult hit_rate_at_k(const Dataset& dataset, const Hyperparams& hyperparams, int k,
                            std::uint64_t seed, std::size_t max_users) {
    const auto trained = train(dataset, hyperparams);
    return hit_rate_at_k(trained.model, dataset, k, seed, max_users);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

ZTestResult z_test_one_sided(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw DataError("z-test requires at least 2 values per sample");
    }
    const auto mean = [](std::span<const double> values) {
        double sum = 0.0;
        for (const double v : values) sum += v;
        return sum / static_cast<double>(values.size());
    };
    const auto sample_variance = [](std::span<const double> values, double m) {
        double sum = 0.0;
        for (const double v : values) sum += (v - m) * (v - m);
        return sum / static_cast<double>(values.size() - 1);
    };

    const double mean_a = mean(a);
    const double mean_b = mean(b);
    const double se2 = sample_variance(a, mean_a) / static_cast<double>(a.size()) +
                       sample_variance(b, mean_b) / static_cast<double>(b.size());
    if (!(se2 > 0.0)) throw DataError("z-test standard error is zero (constant samples)");

    ZTestResult result;
    result.z = (mean_a - mean_b) / std::sqrt(se2);
    // p = 1 - Phi(z), computed through erfc directly to keep precision for
    // large z. The true tail probability is never exactly 0 or 1, so keep p
    // inside the representable open interval even where erfc underflows.
    result.p = 0.5 * std::erfc(result.z / std::numbers::sqrt2);
    result.p = std::clamp(result.p, std::numeric_limits<double>::denorm_min(),
                          std::nextafter(1.0, 0.0));
    return result;
}

std::vector<std::size_t> histogram(std::span<const double> values,
                                   std::span<const double> bin_edges) {
    if (bin_edges.size() < 2) throw DataError("histogram needs at least 2 bin edges");
    for (std::size_t i = 1; i < bin_edges.size(); ++i) {
        if (!(bin_edges[i - 1] < bin_edges[i])) {
            throw DataError("histogram bin edges must be strictly ascending");
        }
    }

    std::vector<std::size_t> counts(bin_edges.size() - 1, 0);
    for (const double value : values) {
        if (value < bin_edges.front() || value > bin_edges.back()) continue;
        if (value == bin_edges.back()) {
            counts.back()++;  // last bin is closed
            continue;
        }
        const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), value);
        counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1]++;
    }
    return counts;
}

std::string histogram_csv(std::span<const double> bin_edges,
                          std::span<const std::size_t> counts) {
    if (bin_edges.size() != counts.size() + 1) {
        throw DataError("bin edge and count sizes are inconsistent");
    }
    std::string out = "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out += detail::format_double(bin_edges[i]);
        out.push_back(',');
        out += detail::format_double(bin_edges[i + 1]);
        out.push_back(',');
        out += std::to_string(counts[i]);
        out.push_back('\n');
    }
    return out;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json doc;
    if (rmse) doc["rmse"] = *rmse;
    if (!fold_rmse.empty()) doc["fold_rmse"] = fold_rmse;
    if (hit_rate_at_k) doc["hit_rate_at_k"] = *hit_rate_at_k;
    if (popularity_share) doc["popularity_share"] = *popularity_share;
    if (z) doc["z"] = *z;
    if (p) doc["p"] = *p;
    if (!histogram_counts.empty()) {
        doc["histogram"] = {{"edges", histogram_edges}, {"counts", histogram_counts}};
    }
    std::string body = doc.dump(2);
    body.push_back('\n');
    return body;
}

}  // namespace lolrec
