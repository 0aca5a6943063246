#ifndef LOLREC_EVAL_HPP
#define LOLREC_EVAL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lolrec/ratings.hpp"
#include "lolrec/recommend.hpp"
#include "lolrec/svd.hpp"

namespace lolrec {

double rmse(std::span<const double> predictions, std::span<const double> truths);

// Seeded random partition of [0, n) into `folds` slices whose sizes differ
// by at most one. Throws DataError on degenerate partitions.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, int folds, std::uint64_t seed);

struct CvFold {
    double rmse = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // held-out rows whose user or item was unseen in training
};

struct CvResult {
    std::vector<CvFold> folds;
    double mean_rmse = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

// Trains on folds-1 slices and scores clamped predictions on the held-out
// slice. Held-out rows whose user or item never appeared in training are
// skipped and counted.
CvResult kfold_cv(const Dataset& dataset, const Hyperparams& hyperparams, int folds,
                  std::uint64_t seed);

struct HyperGrid {
    std::vector<int> epochs_values;
    std::vector<double> lambda_values;
    std::vector<double> gamma_values;
};

struct GridPoint {
    int epochs = 0;
    double lambda = 0.0;
    double gamma = 0.0;
    double mean_rmse = 0.0;
    CvResult cv;
};

struct GridSearchResult {
    Hyperparams best;
    double best_rmse = 0.0;
    std::vector<GridPoint> table;  // lexicographic grid order
};

// Exhaustive cross-validated search minimizing mean RMSE; ties keep the
// first point in lexicographic grid order. Points evaluate concurrently
// (jobs = 0 picks the hardware count) and results merge in grid order, so
// concurrency never changes the outcome.
GridSearchResult grid_search(const Dataset& dataset, const Hyperparams& base,
                             const HyperGrid& grid, int folds, std::uint64_t seed,
                             unsigned jobs = 0);

// Fraction of recommended slots occupied by items in the top `decile` of
// items ranked by training-set rating count (ties by champion_id).
double popularity_share(const std::vector<RecommendationList>& recommendations,
                        const Dataset& dataset, double decile = 0.10);

struct HitRateResult {
    double hit_rate = 0.0;
    std::size_t trials = 0;
    std::size_t hits = 0;
    // Mean over trials of k / candidate count: what a uniformly random
    // ranker would score under the same protocol.
    double expected_random = 0.0;
};

// Leave-one-out protocol: per sampled user (>= 2 rated items), hide their
// top-rated item, fold in from the remainder capped at 5, and test whether
// the hidden item lands in the top-k recommendations. max_users = 0 keeps
// every eligible user; otherwise a seeded sample.
HitRateResult hit_rate_at_k(const FactorModel& model, const Dataset& dataset, int k,
                            std::uint64_t seed, std::size_t max_users = 0);
HitRateResult hit_rate_at_k(const Dataset& dataset, const Hyperparams& hyperparams, int k,
                            std::uint64_t seed, std::size_t max_users = 0);

struct ZTestResult {
    double z = 0.0;
    double p = 0.0;
};

// One-sided two-sample Z-test for means, alternative mean(a) > mean(b):
//   z = (mean_a - mean_b) / sqrt(s_a^2/n_a + s_b^2/n_b)
// with Bessel-corrected sample variances; p = 1 - Phi(z).
ZTestResult z_test_one_sided(std::span<const double> a, std::span<const double> b);

// Standard normal CDF via erfc, accurate to well below 1e-10.
double normal_cdf(double z);

// Counts of values per [edge_i, edge_i+1) bin, last bin closed. Values
// outside [first, last] are ignored.
std::vector<std::size_t> histogram(std::span<const double> values,
                                   std::span<const double> bin_edges);

// CSV rendering with columns bin_low,bin_high,count.
std::string histogram_csv(std::span<const double> bin_edges,
                          std::span<const std::size_t> counts);

// Metric bundle for report emission; only the populated fields appear in
// the JSON document.
struct EvalReport {
    std::optional<double> rmse;
    std::vector<double> fold_rmse;
    std::optional<double> hit_rate_at_k;
    std::optional<double> popularity_share;
    std::optional<double> z;
    std::optional<double> p;
    std::vector<double> histogram_edges;
    std::vector<std::size_t> histogram_counts;

    std::string to_json() const;
};

}  // namespace lolrec

#endif  // LOLREC_EVAL_HPP
