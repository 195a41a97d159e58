#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "parcel/errors.hpp"
#include "parcel/metrics.hpp"
#include "parcel/rng.hpp"

using namespace parcel;

TEST_CASE("contingency of a partition with itself is diagonal") {
    Parcellation p = make_parcellation({0, 1, 2, 0, 1, 2});
    ContingencyTable t = contingency(p, p);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(t.counts[i][j] == (i == j ? 2u : 0u));
    CHECK(t.total == 6);
}

TEST_CASE("contingency of a small worked example") {
    Parcellation p = make_parcellation({0, 0, 1, 1});
    Parcellation q = make_parcellation({0, 0, 0, 1});
    ContingencyTable t = contingency(p, q);
    CHECK(t.counts[0][0] == 2);
    CHECK(t.counts[0][1] == 0);
    CHECK(t.counts[1][0] == 1);
    CHECK(t.counts[1][1] == 1);
}

TEST_CASE("constant second partition collapses to the row sums") {
    Parcellation p = make_parcellation({0, 1, 1, 2});
    Parcellation q = make_parcellation({0, 0, 0, 0});
    ContingencyTable t = contingency(p, q);
    REQUIRE(t.col_sums.size() == 1);
    CHECK(t.counts[0][0] == t.row_sums[0]);
    CHECK(t.counts[1][0] == t.row_sums[1]);
    CHECK(t.counts[2][0] == t.row_sums[2]);
}

TEST_CASE("contingency rejects different seed counts") {
    CHECK_THROWS_AS(contingency(make_parcellation({0, 1}), make_parcellation({0})),
                    Error);
}

TEST_CASE("ARI of identical partitions is 1") {
    Parcellation p = make_parcellation({0, 1, 0, 2, 1});
    CHECK(adjusted_rand_index(p, p) == doctest::Approx(1.0));
}

TEST_CASE("ARI of a small worked example is 0") {
    Parcellation p = make_parcellation({0, 0, 1, 1});
    Parcellation q = make_parcellation({0, 0, 0, 1});
    CHECK(adjusted_rand_index(p, q) == doctest::Approx(0.0));
}

TEST_CASE("ARI degenerate cases follow the documented convention") {
    Parcellation singletons = make_parcellation({0, 1, 2, 3});
    Parcellation lump = make_parcellation({0, 0, 0, 0});
    CHECK(adjusted_rand_index(singletons, singletons) == 1.0);
    CHECK(adjusted_rand_index(lump, lump) == 1.0);
    CHECK(adjusted_rand_index(singletons, lump) == 0.0);
}

TEST_CASE("ARI is symmetric and relabeling invariant") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Parcellation p = oracles::random_partition(15, 4, rng());
        Parcellation q = oracles::random_partition(15, 3, rng());
        CHECK(adjusted_rand_index(p, q) == adjusted_rand_index(q, p));
        // Relabel q by reversing label values.
        std::vector<uint32_t> relabeled(q.labels.size());
        for (std::size_t i = 0; i < q.labels.size(); ++i)
            relabeled[i] = q.n_parcels - 1 - q.labels[i];
        Parcellation qr = make_parcellation(relabeled);
        CHECK(adjusted_rand_index(p, qr) == doctest::Approx(adjusted_rand_index(p, q)));
    }
}

TEST_CASE("ARI matches the brute-force pair-counting oracle") {
    Rng rng(23);
    std::uniform_int_distribution<std::size_t> n_pick(2, 12);
    std::uniform_int_distribution<uint32_t> k_pick(1, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t n = n_pick(rng);
        Parcellation p = oracles::random_partition(n, k_pick(rng), rng());
        Parcellation q = oracles::random_partition(n, k_pick(rng), rng());
        CHECK(adjusted_rand_index(p, q) ==
              doctest::Approx(oracles::pair_counting_ari(p, q)).epsilon(1e-12));
    }
}

TEST_CASE("mean ARI of independent random labelings is near chance level") {
    Rng rng(31);
    double sum = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        Parcellation p = oracles::random_partition(200, 5, rng());
        Parcellation q = oracles::random_partition(200, 5, rng());
        sum += adjusted_rand_index(p, q);
    }
    CHECK(std::abs(sum / trials) < 0.02);
}

TEST_CASE("consistency curve of identical dendrograms is 1 at every k") {
    auto features = oracles::random_features(16, 3, 55);
    Dendrogram d = build_dendrogram(features, oracles::complete_graph(16),
                                    std::vector<double>(16, 1.0), {});
    auto rows = consistency_curve({d, d}, {1, 2, 5, 16});
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) CHECK(r.ari == doctest::Approx(1.0));
}

TEST_CASE("consistency curve rejects mismatched dendrograms and bad k") {
    auto f1 = oracles::random_features(8, 2, 1);
    auto f2 = oracles::random_features(9, 2, 2);
    Dendrogram d1 = build_dendrogram(f1, oracles::complete_graph(8),
                                     std::vector<double>(8, 1.0), {});
    Dendrogram d2 = build_dendrogram(f2, oracles::complete_graph(9),
                                     std::vector<double>(9, 1.0), {});
    CHECK_THROWS_AS(consistency_curve({d1, d2}, {2}), Error);
    CHECK_THROWS_AS(consistency_curve({d1, d1}, {9}), Error);
}
