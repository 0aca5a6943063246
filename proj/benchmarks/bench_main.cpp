#include <benchmark/benchmark.h>

#include <vector>

#include "lolrec/data.hpp"
#include "lolrec/eval.hpp"
#include "lolrec/ratings.hpp"
#include "lolrec/recommend.hpp"
#include "lolrec/slope_one.hpp"
#include "lolrec/svd.hpp"

namespace {

using namespace lolrec;

Dataset make_dataset(std::size_t users, int items_per_pool, std::uint64_t seed) {
    SynthConfig config;
    config.n_users = users;
    config.seed = seed;
    for (int pool = 0; pool < 2; ++pool) {
        Archetype archetype;
        for (int i = 0; i < items_per_pool; ++i) {
            archetype.pool.push_back(pool * items_per_pool + i + 1);
            archetype.intensity.push_back(25.0);
        }
        config.archetypes.push_back(archetype);
    }
    return build_training_set(generate_synthetic(config));
}

void NormalizeUser(benchmark::State& state) {
    std::vector<MasteryRecord> records;
    for (int i = 0; i < state.range(0); ++i) {
        records.push_back({"p", i, 1000 + 37 * i});
    }
    for (auto _ : state) {
        auto triples = normalize_user(records);
        benchmark::DoNotOptimize(triples);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(NormalizeUser)->Arg(10)->Arg(140);

void SgdEpoch(benchmark::State& state) {
    const auto dataset = make_dataset(static_cast<std::size_t>(state.range(0)), 20, 1);
    Hyperparams h;
    h.factors = static_cast<int>(state.range(1));
    h.gamma = 0.0005;
    h.seed = 2;
    auto model = init_model(dataset, h);
    for (auto _ : state) {
        sgd_epoch(model, dataset);
    }
    state.SetItemsProcessed(state.iterations() * dataset.triples.size());
}
BENCHMARK(SgdEpoch)->Args({500, 32})->Args({500, 100})->Args({2500, 100});

void FoldIn(benchmark::State& state) {
    const auto dataset = make_dataset(200, 20, 3);
    Hyperparams h;
    h.factors = static_cast<int>(state.range(0));
    h.epochs = 2;
    h.gamma = 0.002;
    h.seed = 4;
    const auto model = train(dataset, h).model;
    const std::vector<ProfileEntry> profile = {{1, 100.0}, {2, 60.0}, {3, 40.0}, {4, 25.0}, {5, 10.0}};
    for (auto _ : state) {
        auto vec = fold_in(model, profile);
        benchmark::DoNotOptimize(vec);
    }
}
BENCHMARK(FoldIn)->Arg(16)->Arg(100);

void SlopeOneTrain(benchmark::State& state) {
    const auto dataset = make_dataset(static_cast<std::size_t>(state.range(0)), 70, 5);
    for (auto _ : state) {
        auto model = train_slope_one(dataset);
        benchmark::DoNotOptimize(model);
    }
    state.SetItemsProcessed(state.iterations() * dataset.triples.size());
}
BENCHMARK(SlopeOneTrain)->Arg(500)->Arg(2500);

void RecommendTopK(benchmark::State& state) {
    const auto dataset = make_dataset(500, 70, 6);
    Hyperparams h;
    h.factors = 100;
    h.epochs = 2;
    h.gamma = 0.0005;
    h.seed = 7;
    const auto model = train(dataset, h).model;
    const std::vector<MasteryRecord> records = {
        {"q", 1, 90000}, {"q", 2, 50000}, {"q", 3, 30000}, {"q", 4, 20000}, {"q", 5, 8000}};
    for (auto _ : state) {
        auto list = recommend(model, records, 5);
        benchmark::DoNotOptimize(list);
    }
}
BENCHMARK(RecommendTopK);

void SyntheticGeneration(benchmark::State& state) {
    for (auto _ : state) {
        auto records = generate_synthetic(
            SynthConfig{static_cast<std::size_t>(state.range(0)),
                        {{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                          std::vector<double>(10, 50.0)}},
                        0.0,
                        0.5,
                        9});
        benchmark::DoNotOptimize(records);
    }
}
BENCHMARK(SyntheticGeneration)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
