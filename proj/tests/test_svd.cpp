#include <doctest.h>

#include <cmath>
#include <fstream>

#include "lolrec/data.hpp"
#include "lolrec/errors.hpp"
#include "lolrec/rng.hpp"
#include "lolrec/svd.hpp"
#include "support.hpp"

using namespace lolrec;

namespace {

Dataset small_synthetic(std::uint64_t seed, std::size_t users = 50, int items_per_pool = 10) {
    SynthConfig config;
    config.n_users = users;
    config.seed = seed;
    for (int pool = 0; pool < 2; ++pool) {
        Archetype archetype;
        for (int i = 0; i < items_per_pool; ++i) {
            archetype.pool.push_back(pool * items_per_pool + i + 1);
            archetype.intensity.push_back(30.0);
        }
        config.archetypes.push_back(archetype);
    }
    return build_training_set(generate_synthetic(config));
}

// Test-side gradient of the regularized objective, derived directly from
// the per-rating update rule: each rating contributes -2*(e*q - lambda*p)
// to the user gradient and -2*(e*p - lambda*q) to the item gradient.
struct Gradients {
    std::vector<double> users;
    std::vector<double> items;
};

Gradients analytic_gradients(const FactorModel& model, const Dataset& dataset) {
    const int f = model.params.factors;
    Gradients g;
    g.users.assign(model.user_factors.size(), 0.0);
    g.items.assign(model.item_factors.size(), 0.0);
    for (const auto& triple : dataset.triples) {
        const auto u = *dataset.users.find(triple.player_id);
        const auto i = *model.items.find(triple.champion_id);
        const auto p = model.user_row(u);
        const auto q = model.item_row(i);
        double dot = 0.0;
        for (int k = 0; k < f; ++k) dot += p[k] * q[k];
        const double err = triple.rating - dot;
        for (int k = 0; k < f; ++k) {
            g.users[u * f + k] += -2.0 * (err * q[k] - model.params.lambda * p[k]);
            g.items[i * f + k] += -2.0 * (err * p[k] - model.params.lambda * q[k]);
        }
    }
    return g;
}

// Iterative minimizer of the fold-in objective, used as an oracle for the
// closed-form solver.
std::vector<double> fold_in_gradient_descent(const FactorModel& model,
                                             const std::vector<ProfileEntry>& profile,
                                             double reg) {
    const int f = model.params.factors;
    double lipschitz = reg;
    for (const auto& entry : profile) {
        const auto q = model.item_row(*model.items.find(entry.champion_id));
        for (const double v : q) lipschitz += v * v;
    }
    const double step = 0.5 / std::max(lipschitz, 1e-12);

    std::vector<double> p(f, 0.0);
    std::vector<double> grad(f);
    for (int iter = 0; iter < 200000; ++iter) {
        for (int k = 0; k < f; ++k) grad[k] = 2.0 * reg * p[k];
        for (const auto& entry : profile) {
            const auto q = model.item_row(*model.items.find(entry.champion_id));
            double dot = 0.0;
            for (int k = 0; k < f; ++k) dot += q[k] * p[k];
            const double err = entry.rating - dot;
            for (int k = 0; k < f; ++k) grad[k] += -2.0 * err * q[k];
        }
        double max_grad = 0.0;
        for (int k = 0; k < f; ++k) {
            p[k] -= step * grad[k];
            max_grad = std::max(max_grad, std::fabs(grad[k]));
        }
        if (max_grad < 1e-12) break;
    }
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("svd");

TEST_CASE("hyperparameter presets and validation") {
    const auto def = Hyperparams::paper_default();
    CHECK(def.epochs == 20);
    CHECK(def.lambda == 0.005);
    CHECK(def.gamma == 0.02);
    const auto tuned = Hyperparams::paper_tuned();
    CHECK(tuned.epochs == 20);
    CHECK(tuned.lambda == 0.4);
    CHECK(tuned.gamma == 0.0005);

    Hyperparams bad;
    bad.gamma = 0.0;
    CHECK_THROWS_AS(bad.validate(), ModelError);
    bad = Hyperparams{};
    bad.epochs = 0;
    CHECK_THROWS_AS(bad.validate(), ModelError);
    bad = Hyperparams{};
    bad.lambda = -0.1;
    CHECK_THROWS_AS(bad.validate(), ModelError);
}

TEST_CASE("init_model is deterministic, seed-sensitive, and honors init_std = 0") {
    const auto dataset = dataset_from_triples({{"a", 1, 100}, {"a", 2, 40}, {"b", 1, 70}});
    Hyperparams h;
    h.factors = 4;
    h.seed = 99;

    const auto m1 = init_model(dataset, h);
    const auto m2 = init_model(dataset, h);
    CHECK(m1.user_factors == m2.user_factors);
    CHECK(m1.item_factors == m2.item_factors);

    h.seed = 100;
    const auto m3 = init_model(dataset, h);
    CHECK(m1.user_factors != m3.user_factors);

    h.init_std = 0.0;
    const auto zero = init_model(dataset, h);
    for (const double v : zero.user_factors) CHECK(v == 0.0);
    for (const double v : zero.item_factors) CHECK(v == 0.0);
    // All raw predictions are 0, clamped to the rating floor.
    CHECK(predict(zero, zero.user_row(0), 1) == 1.0);
}

TEST_CASE("sgd_epoch applies the update rule exactly on a single rating") {
    const auto dataset = dataset_from_triples({{"u", 7, 2}});
    Hyperparams h;
    h.factors = 1;
    h.epochs = 1;
    h.gamma = 0.1;
    h.lambda = 0.0;
    h.init_std = 0.0;

    SUBCASE("without regularization") {
        auto model = init_model(dataset, h);
        model.user_factors = {1.0};
        model.item_factors = {1.0};
        sgd_epoch(model, dataset);
        // e = 2 - 1 = 1; p' = 1 + 0.1*(1*1) = 1.1; q' likewise from the old p.
        CHECK(model.user_factors[0] == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(model.item_factors[0] == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(model.epochs_done == 1);
    }

    SUBCASE("with regularization") {
        h.lambda = 0.1;
        auto model = init_model(dataset, h);
        model.user_factors = {1.0};
        model.item_factors = {1.0};
        sgd_epoch(model, dataset);
        // p' = 1 + 0.1*(1*1 - 0.1*1) = 1.09.
        CHECK(model.user_factors[0] == doctest::Approx(1.09).epsilon(1e-12));
        CHECK(model.item_factors[0] == doctest::Approx(1.09).epsilon(1e-12));
    }

    SUBCASE("zero learning rate leaves the model unchanged") {
        auto model = init_model(dataset, h);
        model.user_factors = {1.0};
        model.item_factors = {1.0};
        model.params.gamma = 0.0;  // below the entry-point invariant, the limit holds
        sgd_epoch(model, dataset);
        CHECK(model.user_factors[0] == 1.0);
        CHECK(model.item_factors[0] == 1.0);
    }
}

TEST_CASE("sgd_epoch rejects unindexed users and items") {
    const auto trained_on = dataset_from_triples({{"a", 1, 50}});
    Hyperparams h;
    h.factors = 2;
    auto model = init_model(trained_on, h);

    const auto more_users = dataset_from_triples({{"a", 1, 50}, {"b", 1, 60}});
    CHECK_THROWS_AS(sgd_epoch(model, more_users), ModelError);

    const auto new_item = dataset_from_triples({{"a", 2, 50}});
    CHECK_THROWS_AS(sgd_epoch(model, new_item), ModelError);
}

TEST_CASE("train equals init_model plus repeated sgd_epoch") {
    const auto dataset = small_synthetic(31, 12, 4);
    Hyperparams h;
    h.factors = 5;
    h.epochs = 3;
    h.gamma = 0.005;
    h.seed = 17;

    const auto result = train(dataset, h);
    auto manual = init_model(dataset, h);
    for (int epoch = 0; epoch < h.epochs; ++epoch) sgd_epoch(manual, dataset);
    CHECK(result.model.user_factors == manual.user_factors);
    CHECK(result.model.item_factors == manual.item_factors);
    CHECK(result.objective_trace.size() == 3);
    CHECK(result.objective_trace.back() == doctest::Approx(objective(manual, dataset)));

    const auto again = train(dataset, h);
    CHECK(again.objective_trace == result.objective_trace);
}

TEST_CASE("training descends at a stable learning rate") {
    const auto dataset = small_synthetic(42);
    Hyperparams h;
    h.factors = 8;
    h.epochs = 20;
    h.gamma = 0.005;
    h.lambda = 0.005;
    h.seed = 1;

    const auto result = train(dataset, h);
    REQUIRE(result.objective_trace.size() == 20);
    CHECK(std::isfinite(result.objective_trace.back()));
    CHECK(result.objective_trace.back() < result.objective_trace.front());
}

TEST_CASE("the stock preset learning rate diverges on 1-100 scale ratings") {
    // gamma = 0.02 exceeds the 1/r_max stability bound at r = 100; the
    // objective blows up instead of descending. Pinned so the behavior is
    // visible and documented.
    const auto dataset = small_synthetic(42);
    auto h = Hyperparams::paper_default();
    h.factors = 8;
    h.seed = 1;

    const auto result = train(dataset, h);
    CHECK_FALSE(std::isfinite(result.objective_trace.back()));
}

TEST_CASE("predict clamps the inner product into [1, 100]") {
    const auto dataset = dataset_from_triples({{"a", 7, 50}});
    Hyperparams h;
    h.factors = 2;
    h.init_std = 0.0;
    auto model = init_model(dataset, h);

    model.item_factors = {2.0, 3.0};
    CHECK(predict(model, std::vector<double>{0.5, -1.0}, 7) == 1.0);   // raw -2
    CHECK(predict(model, std::vector<double>{0.0, 0.0}, 7) == 1.0);    // raw 0
    CHECK(predict(model, std::vector<double>{20.0, 30.0}, 7) == 100.0);  // raw 130

    CHECK_THROWS_AS(predict(model, std::vector<double>{1.0, 1.0}, 8), ModelError);
    CHECK_THROWS_AS(predict(model, std::vector<double>{1.0}, 7), ModelError);
}

TEST_CASE("scalar prediction is the plain inner product") {
    const auto dataset = dataset_from_triples({{"a", 3, 50}});
    Hyperparams h;
    h.factors = 1;
    h.init_std = 0.0;
    auto model = init_model(dataset, h);
    model.item_factors = {3.0};
    CHECK(predict(model, std::vector<double>{2.0}, 3) == 6.0);
}

TEST_CASE("fold_in interpolates exactly with one item and zero regularization") {
    const auto dataset = dataset_from_triples({{"a", 11, 50}});
    Hyperparams h;
    h.factors = 1;
    h.init_std = 0.0;
    auto model = init_model(dataset, h);
    model.item_factors = {2.0};

    const std::vector<ProfileEntry> profile = {{11, 50.0}};
    const auto p = fold_in(model, profile, 0.0);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(predict(model, p, 11) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("huge fold-in regularization shrinks the vector to zero") {
    const auto dataset = dataset_from_triples({{"a", 1, 100}, {"a", 2, 40}});
    Hyperparams h;
    h.factors = 3;
    h.seed = 5;
    const auto model = init_model(dataset, h);

    const std::vector<ProfileEntry> profile = {{1, 100.0}, {2, 40.0}};
    const auto p = fold_in(model, profile, 1e9);
    for (const double v : p) CHECK(std::fabs(v) < 1e-5);
}

TEST_CASE("fold_in matches an iterative minimizer and is a local optimum") {
    Rng rng(777);
    const auto dataset = small_synthetic(55, 12, 5);
    Hyperparams h;
    h.factors = 4;
    h.epochs = 5;
    h.gamma = 0.005;
    h.seed = 2;
    const auto model = train(dataset, h).model;

    std::vector<ProfileEntry> profile;
    for (const auto id : {1, 3, 5}) profile.push_back({id, 20.0 + static_cast<double>(rng.below(80))});
    const double reg = 0.05;

    const auto closed = fold_in(model, profile, reg);
    const auto iterative = fold_in_gradient_descent(model, profile, reg);
    REQUIRE(closed.size() == iterative.size());
    for (std::size_t k = 0; k < closed.size(); ++k) {
        CHECK(closed[k] == doctest::Approx(iterative[k]).epsilon(1e-8));
    }

    const double best = fold_in_objective(model, profile, closed, reg);
    for (int direction = 0; direction < 100; ++direction) {
        auto perturbed = closed;
        for (auto& v : perturbed) v += 1e-3 * rng.normal();
        CHECK(fold_in_objective(model, profile, perturbed, reg) >= best - 1e-9);
    }
}

TEST_CASE("fold_in error paths") {
    const auto dataset = dataset_from_triples({{"a", 1, 50}});
    Hyperparams h;
    h.factors = 3;
    const auto model = init_model(dataset, h);

    CHECK_THROWS_AS(fold_in(model, std::vector<ProfileEntry>{}), DataError);
    CHECK_THROWS_AS(fold_in(model, std::vector<ProfileEntry>{{99, 50.0}}), ModelError);
    // One profile item cannot determine 3 factors without regularization.
    CHECK_THROWS_AS(fold_in(model, std::vector<ProfileEntry>{{1, 50.0}}, 0.0), ModelError);
}

TEST_CASE("analytic gradients match central finite differences of the objective") {
    Rng rng(4242);
    for (int trial = 0; trial < 5; ++trial) {
        const int f = 1 + static_cast<int>(rng.below(4));
        std::vector<RatingTriple> triples;
        const auto n_users = 2 + rng.below(3);
        const auto n_items = 2 + rng.below(3);
        for (std::size_t u = 0; u < n_users; ++u) {
            for (std::size_t i = 0; i < n_items; ++i) {
                if (rng.uniform() < 0.6) {
                    triples.push_back({"u" + std::to_string(u), static_cast<std::int32_t>(i),
                                       static_cast<int>(1 + rng.below(100))});
                }
            }
        }
        if (triples.empty()) triples.push_back({"u0", 0, 50});
        const auto dataset = dataset_from_triples(std::move(triples));

        Hyperparams h;
        h.factors = f;
        h.lambda = trial % 2 == 0 ? 0.1 : 0.0;
        h.init_std = 1.0;
        h.seed = 1000 + trial;
        auto model = init_model(dataset, h);

        const auto grads = analytic_gradients(model, dataset);
        const double step = 1e-6;
        for (std::size_t idx = 0; idx < model.user_factors.size(); ++idx) {
            auto plus = model;
            auto minus = model;
            plus.user_factors[idx] += step;
            minus.user_factors[idx] -= step;
            const double fd = (objective(plus, dataset) - objective(minus, dataset)) / (2 * step);
            CHECK(std::fabs(grads.users[idx] - fd) <=
                  1e-5 * std::max({1.0, std::fabs(fd), std::fabs(grads.users[idx])}));
        }
        for (std::size_t idx = 0; idx < model.item_factors.size(); ++idx) {
            auto plus = model;
            auto minus = model;
            plus.item_factors[idx] += step;
            minus.item_factors[idx] -= step;
            const double fd = (objective(plus, dataset) - objective(minus, dataset)) / (2 * step);
            CHECK(std::fabs(grads.items[idx] - fd) <=
                  1e-5 * std::max({1.0, std::fabs(fd), std::fabs(grads.items[idx])}));
        }
    }
}

TEST_CASE("all predictions stay within the rating bounds") {
    Rng rng(606);
    const auto dataset = small_synthetic(8, 20, 6);
    Hyperparams h;
    h.factors = 6;
    h.epochs = 4;
    h.gamma = 0.005;
    h.seed = 3;
    const auto model = train(dataset, h).model;

    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> user(static_cast<std::size_t>(h.factors));
        for (auto& v : user) v = rng.normal(0.0, 10.0);
        const auto champion = model.items.key_of(static_cast<std::uint32_t>(rng.below(model.items.size())));
        const double score = predict(model, user, champion);
        CHECK(score >= 1.0);
        CHECK(score <= 100.0);
    }
}

TEST_CASE("model save/load roundtrip is exact") {
    test::TempDir dir;
    const auto dataset = small_synthetic(12, 8, 3);
    Hyperparams h;
    h.factors = 3;
    h.epochs = 2;
    h.gamma = 0.005;
    h.seed = 21;
    h.fold_in_lambda = 0.25;
    const auto model = train(dataset, h).model;

    const auto path = dir.file("model.bin");
    save_model(model, path);
    const auto loaded = load_model(path);

    CHECK(loaded.user_factors == model.user_factors);
    CHECK(loaded.item_factors == model.item_factors);
    CHECK(loaded.items == model.items);
    CHECK(loaded.n_users == model.n_users);
    CHECK(loaded.epochs_done == model.epochs_done);
    CHECK(loaded.params == model.params);
}

TEST_CASE("model loading rejects corrupt files") {
    test::TempDir dir;
    const auto dataset = dataset_from_triples({{"a", 1, 50}, {"b", 2, 60}});
    Hyperparams h;
    h.factors = 2;
    const auto model = init_model(dataset, h);
    const auto path = dir.file("model.bin");
    save_model(model, path);

    const auto read_bytes = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
    const auto write_bytes = [](const std::filesystem::path& p, const std::string& bytes) {
        std::ofstream(p, std::ios::binary) << bytes;
    };

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_model(dir.file("nope.bin")), ModelError);
    }

    SUBCASE("truncated file") {
        auto bytes = read_bytes(path);
        bytes.resize(bytes.size() / 2);
        write_bytes(dir.file("trunc.bin"), bytes);
        CHECK_THROWS_WITH_AS(load_model(dir.file("trunc.bin")), "truncated model file", ModelError);
    }

    SUBCASE("unknown version") {
        auto bytes = read_bytes(path);
        bytes[8] = 9;  // version field follows the 8-byte magic
        write_bytes(dir.file("vers.bin"), bytes);
        CHECK_THROWS_WITH_AS(load_model(dir.file("vers.bin")), "unsupported model format version 9",
                             ModelError);
    }

    SUBCASE("not a model file") {
        write_bytes(dir.file("junk.bin"), "definitely not a model");
        CHECK_THROWS_AS(load_model(dir.file("junk.bin")), ModelError);
    }

    SUBCASE("trailing bytes") {
        write_bytes(dir.file("extra.bin"), read_bytes(path) + "extra");
        CHECK_THROWS_WITH_AS(load_model(dir.file("extra.bin")), "trailing bytes in model file",
                             ModelError);
    }
}

TEST_SUITE_END();
