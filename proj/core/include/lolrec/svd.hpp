#ifndef LOLREC_SVD_HPP
#define LOLREC_SVD_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lolrec/ratings.hpp"

namespace lolrec {

// SGD training configuration. gamma is the learning rate and lambda the
// regularization weight, matching the usual lambda/gamma naming.
struct Hyperparams {
    int factors = 100;  // latent dimensionality f
    int epochs = 20;
    double gamma = 0.02;
    double lambda = 0.005;
    std::uint64_t seed = 0;
    double init_std = 0.1;
    std::optional<double> fold_in_lambda;  // defaults to lambda when unset

    double effective_fold_in_lambda() const { return fold_in_lambda.value_or(lambda); }

    void validate() const;

    // Stock configuration: 20 epochs, lambda 0.005, gamma 0.02.
    static Hyperparams paper_default();
    // Grid-search optimum: 20 epochs, lambda 0.4, gamma 0.0005.
    static Hyperparams paper_tuned();

    bool operator==(const Hyperparams&) const = default;
};

// Unbiased latent-factor model: ratings are predicted as plain inner
// products q_i . p_u with no user/item bias terms or global mean. User row
// u pairs with dense user index u of the training dataset; items carry
// their own id mapping so a persisted model can serve queries alone.
struct FactorModel {
    Hyperparams params;
    IndexMap<std::int32_t> items;
    std::size_t n_users = 0;
    int epochs_done = 0;
    std::vector<double> user_factors;  // n_users x factors, row-major
    std::vector<double> item_factors;  // items.size() x factors, row-major

    static constexpr double kMinRating = 1.0;
    static constexpr double kMaxRating = 100.0;

    std::span<const double> user_row(std::uint32_t user) const;
    std::span<const double> item_row(std::uint32_t item) const;
    std::span<double> user_row(std::uint32_t user);
    std::span<double> item_row(std::uint32_t item);
};

// Fills P and Q with Normal(0, init_std^2) draws from a generator seeded by
// hyperparams.seed. Deterministic given (dataset, hyperparams).
FactorModel init_model(const Dataset& dataset, const Hyperparams& hyperparams);

// One full SGD pass over the dataset in a per-epoch shuffled order derived
// from the model seed and the number of epochs already run. Per rating,
// with error e = r - q.p:
//   p <- p + gamma * (e * q - lambda * p)
//   q <- q + gamma * (e * p - lambda * q)
// both updates reading the pre-step values. Throws ModelError when the
// dataset's users or items are not indexed in the model.
void sgd_epoch(FactorModel& model, const Dataset& dataset);

// Regularized squared error over the dataset:
//   J = sum over ratings of (r - q.p)^2 + lambda * (|p|^2 + |q|^2),
// the objective whose gradient the SGD step follows (up to the usual
// folded factor of 2).
double objective(const FactorModel& model, const Dataset& dataset);

struct TrainResult {
    FactorModel model;
    std::vector<double> objective_trace;  // J after each epoch
};

// init_model followed by hyperparams.epochs SGD passes; records J after
// each epoch. Single-threaded and fully deterministic.
TrainResult train(const Dataset& dataset, const Hyperparams& hyperparams);

// Inner-product prediction clamped to [1, 100]. Throws ModelError for an
// item the model has never seen.
double predict(const FactorModel& model, std::span<const double> user_vector,
               std::int32_t champion_id);

// Latent vector for a user absent at training time: the minimizer of
//   sum over profile of (r - q_i . p)^2 + reg * |p|^2
// with the item factors fixed, solved in closed form via the f x f normal
// equations. reg defaults to hyperparams.fold_in_lambda.
std::vector<double> fold_in(const FactorModel& model, std::span<const ProfileEntry> profile,
                            std::optional<double> reg = std::nullopt);

// Objective minimized by fold_in, exposed for optimality checks.
double fold_in_objective(const FactorModel& model, std::span<const ProfileEntry> profile,
                         std::span<const double> user_vector, std::optional<double> reg = std::nullopt);

// Versioned binary model container; load(save(m)) is bit-exact. See
// docs in the repository README for the exact layout.
void save_model(const FactorModel& model, const std::filesystem::path& path);
FactorModel load_model(const std::filesystem::path& path);

}  // namespace lolrec

#endif  // LOLREC_SVD_HPP
