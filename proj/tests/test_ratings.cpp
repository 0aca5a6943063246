#include <doctest.h>

#include <algorithm>

#include "lolrec/errors.hpp"
#include "lolrec/ratings.hpp"
#include "lolrec/rng.hpp"
#include "support.hpp"

using namespace lolrec;

TEST_SUITE_BEGIN("ratings");

TEST_CASE("normalize_user reproduces the sample top-5 ratings exactly") {
    const auto triples = normalize_user(test::table1_records());
    REQUIRE(triples.size() == 5);
    CHECK(triples[0].rating == 100);
    CHECK(triples[1].rating == 38);
    CHECK(triples[2].rating == 29);
    CHECK(triples[3].rating == 25);
    CHECK(triples[4].rating == 17);
    // Output order matches input order.
    CHECK(triples[0].champion_id == 267);
    CHECK(triples[4].champion_id == 117);
}

TEST_CASE("normalize_user maps a single record to 100") {
    const auto triples = normalize_user({{"a", 7, 42}});
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].rating == 100);
}

TEST_CASE("normalize_user errors") {
    CHECK_THROWS_AS(normalize_user({}), DataError);
    CHECK_THROWS_AS(normalize_user({{"a", 1, 0}}), DataError);
    CHECK_THROWS_AS(normalize_user({{"a", 1, 10}, {"b", 2, 10}}), DataError);
}

TEST_CASE("normalization is invariant under scaling all cmp values") {
    auto records = test::table1_records();
    const auto base = normalize_user(records);
    for (auto& record : records) record.cmp *= 3;
    CHECK(normalize_user(records) == base);

    // Random instances, several integer scales.
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<MasteryRecord> instance;
        const auto count = 1 + rng.below(8);
        for (std::size_t i = 0; i < count; ++i) {
            instance.push_back({"p", static_cast<std::int32_t>(i),
                                static_cast<std::int64_t>(1 + rng.below(1000000))});
        }
        const auto expected = normalize_user(instance);
        for (const std::int64_t scale : {2, 3, 7, 10}) {
            auto scaled = instance;
            for (auto& record : scaled) record.cmp *= scale;
            CHECK(normalize_user(scaled) == expected);
        }
    }
}

TEST_CASE("normalization is monotone in cmp and bounded in [1, 100]") {
    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<MasteryRecord> instance;
        const auto count = 1 + rng.below(12);
        for (std::size_t i = 0; i < count; ++i) {
            instance.push_back({"p", static_cast<std::int32_t>(i),
                                static_cast<std::int64_t>(1 + rng.below(500000))});
        }
        const auto triples = normalize_user(instance);
        int max_rating = 0;
        for (std::size_t i = 0; i < triples.size(); ++i) {
            CHECK(triples[i].rating >= 1);
            CHECK(triples[i].rating <= 100);
            max_rating = std::max(max_rating, triples[i].rating);
            for (std::size_t j = 0; j < triples.size(); ++j) {
                if (instance[i].cmp >= instance[j].cmp) {
                    CHECK(triples[i].rating >= triples[j].rating);
                }
            }
        }
        CHECK(max_rating == 100);
    }
}

TEST_CASE("build_training_set assembles per-player normalized triples") {
    std::vector<MasteryRecord> records = test::table1_records();
    records.push_back({"other", 1, 5000});
    records.push_back({"other", 2, 2500});

    const auto dataset = build_training_set(records);
    CHECK(dataset.users.size() == 2);
    CHECK(dataset.items.size() == 7);
    CHECK(dataset.triples.size() == 7);

    // Per-user max is 100.
    for (const auto& player : {std::string("sample-player"), std::string("other")}) {
        int best = 0;
        for (const auto& triple : dataset.triples) {
            if (triple.player_id == player) best = std::max(best, triple.rating);
        }
        CHECK(best == 100);
    }
}

TEST_CASE("build_training_set drops cmp = 0 rows") {
    const auto dataset = build_training_set({{"a", 1, 10}, {"a", 2, 0}, {"b", 3, 7}});
    CHECK(dataset.triples.size() == 2);
    for (const auto& triple : dataset.triples) CHECK(triple.champion_id != 2);
}

TEST_CASE("build_training_set errors") {
    CHECK_THROWS_AS(build_training_set({}), DataError);
    CHECK_THROWS_AS(build_training_set({{"a", 1, 0}}), DataError);
    CHECK_THROWS_AS(build_training_set({{"a", 1, 5}, {"a", 1, 6}}), DataError);
    CHECK_THROWS_AS(build_training_set({{"a", 1, -3}}), DataError);
}

TEST_CASE("dense indices follow first-seen order and builds are idempotent") {
    const std::vector<MasteryRecord> records = {
        {"second", 9, 100}, {"second", 4, 50}, {"first", 4, 10}, {"first", 2, 20}};
    const auto dataset = build_training_set(records);
    CHECK(dataset.users.key_of(0) == "second");
    CHECK(dataset.users.key_of(1) == "first");
    CHECK(dataset.items.key_of(0) == 9);
    CHECK(dataset.items.key_of(1) == 4);
    CHECK(dataset.items.key_of(2) == 2);
    CHECK(build_training_set(records) == dataset);
}

TEST_CASE("dataset_from_triples validates range and duplicates") {
    CHECK_THROWS_AS(dataset_from_triples({}), DataError);
    CHECK_THROWS_AS(dataset_from_triples({{"a", 1, 0}}), DataError);
    CHECK_THROWS_AS(dataset_from_triples({{"a", 1, 101}}), DataError);
    CHECK_THROWS_AS(dataset_from_triples({{"a", 1, 50}, {"a", 1, 60}}), DataError);
    const auto dataset = dataset_from_triples({{"a", 1, 50}, {"b", 1, 60}});
    CHECK(dataset.users.size() == 2);
    CHECK(dataset.items.size() == 1);
}

TEST_CASE("dataset_stats counts rows, users, and ratings") {
    const auto dataset = dataset_from_triples(
        {{"a", 1, 100}, {"a", 2, 40}, {"a", 3, 40}, {"b", 1, 100}, {"b", 4, 7}});
    const auto stats = dataset_stats(dataset);
    CHECK(stats.n_users == 2);
    CHECK(stats.n_items == 4);
    CHECK(stats.n_rows == 5);
    CHECK(stats.mean_rows_per_user == doctest::Approx(2.5));
    CHECK(stats.rating_counts[99] == 2);   // rating 100
    CHECK(stats.rating_counts[39] == 2);   // rating 40
    CHECK(stats.rating_counts[6] == 1);    // rating 7
    std::size_t total = 0;
    for (const auto count : stats.rating_counts) total += count;
    CHECK(total == stats.n_rows);
}

TEST_CASE("dense_ratings maps triples through the dataset indices") {
    const auto dataset = dataset_from_triples({{"a", 9, 10}, {"b", 4, 20}, {"a", 4, 30}});
    const auto dense = dense_ratings(dataset);
    REQUIRE(dense.size() == 3);
    CHECK(dense[0].user == 0);
    CHECK(dense[0].item == 0);
    CHECK(dense[0].rating == 10.0);
    CHECK(dense[1].user == 1);
    CHECK(dense[1].item == 1);
    CHECK(dense[2].user == 0);
    CHECK(dense[2].item == 1);
}

TEST_SUITE_END();
