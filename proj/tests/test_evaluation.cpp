#include <doctest.h>

#include <cmath>
#include <random>

#include <graphkm/errors.hpp>
#include <graphkm/evaluation.hpp>

#include "support.hpp"

using namespace graphkm;
using namespace testsupport;

namespace {

MembershipMatrix partition(std::size_t k, std::vector<std::size_t> assignment) {
    MembershipMatrix m;
    m.k = k;
    m.assignment = std::move(assignment);
    return m;
}

}  // namespace

TEST_CASE("pairwise_distances is symmetric with a zero diagonal") {
    const auto sample = single_node_set({0.0, 3.0, 7.0});
    DistanceOracle oracle;
    const auto d = pairwise_distances(sample, oracle);
    CHECK(oracle.calls() == 3);
    CHECK(d[0][0] == 0.0);
    CHECK(d[0][1] == doctest::Approx(3.0));
    CHECK(d[1][2] == doctest::Approx(4.0));
    CHECK(d[2][0] == d[0][2]);

    DistanceOracle parallel_oracle;
    const auto d4 = pairwise_distances(sample, parallel_oracle, 4);
    CHECK(d4 == d);
}

TEST_CASE("silhouette matches the hand-computed two-cluster case") {
    const auto sample = single_node_set({0.0, 0.1, 10.0, 10.1});
    DistanceOracle oracle;
    const auto d = pairwise_distances(sample, oracle);
    const SilhouetteResult r = silhouette_index(d, partition(2, {0, 0, 1, 1}));

    // a = 0.1 everywhere; b averages {9.9, 10.0} or {10.0, 10.1}
    CHECK(r.per_pattern[0] == doctest::Approx((10.05 - 0.1) / 10.05).epsilon(1e-12));
    CHECK(r.per_pattern[1] == doctest::Approx((9.95 - 0.1) / 9.95).epsilon(1e-12));
    CHECK(r.index == doctest::Approx(0.98995).epsilon(1e-3));
    CHECK(r.per_cluster.size() == 2);
    CHECK(r.per_cluster[0] == doctest::Approx(r.per_cluster[1]).epsilon(1e-12));

    const double reference = scalar_silhouette({0.0, 0.1, 10.0, 10.1}, {0, 0, 1, 1}, 2);
    CHECK(r.index == doctest::Approx(reference).epsilon(1e-12));
}

TEST_CASE("silhouette conventions: identical points, singletons, bad shapes") {
    const auto same = single_node_set({2.0, 2.0, 2.0, 2.0});
    DistanceOracle oracle;
    const auto d = pairwise_distances(same, oracle);
    const SilhouetteResult r = silhouette_index(d, partition(2, {0, 1, 0, 1}));
    CHECK(r.index == 0.0);  // 0/0 convention
    for (double s : r.per_pattern) CHECK(s == 0.0);

    const auto mixed = single_node_set({0.0, 1.0, 50.0});
    DistanceOracle o2;
    const auto d2 = pairwise_distances(mixed, o2);
    const SilhouetteResult r2 = silhouette_index(d2, partition(2, {0, 0, 1}));
    CHECK(r2.per_pattern[2] == 0.0);  // singleton
    CHECK(r2.per_pattern[0] > 0.9);

    CHECK_THROWS_AS(silhouette_index(d2, partition(1, {0, 0, 0})), ConfigError);
    CHECK_THROWS_AS(silhouette_index(d2, partition(3, {0, 0, 1})), ConfigError);
}

TEST_CASE("silhouette is invariant under cluster relabeling") {
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::vector<double> xs(12);
    for (double& x : xs) x = val(rng);
    const auto sample = single_node_set(xs);
    DistanceOracle oracle;
    const auto d = pairwise_distances(sample, oracle);

    const std::vector<std::size_t> labels = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2};
    std::vector<std::size_t> relabeled;
    for (std::size_t l : labels) relabeled.push_back((l + 1) % 3);
    CHECK(silhouette_index(d, partition(3, labels)).index ==
          doctest::Approx(silhouette_index(d, partition(3, relabeled)).index).epsilon(1e-12));
}

TEST_CASE("silhouette equals the scalar reference on random partitions") {
    std::mt19937_64 rng(402);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int it = 0; it < 20; ++it) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 12);
        const std::size_t k = 2 + static_cast<std::size_t>(rng() % 3);
        std::vector<double> xs(n);
        for (double& x : xs) x = val(rng);
        // nonempty clusters: first k patterns pin one each
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng() % k;

        const auto sample = single_node_set(xs);
        DistanceOracle oracle;
        const auto d = pairwise_distances(sample, oracle);
        const SilhouetteResult r = silhouette_index(d, partition(k, labels));
        CHECK(r.index == doctest::Approx(scalar_silhouette(xs, labels, k)).epsilon(1e-12));
        CHECK(r.index >= -1.0);
        CHECK(r.index <= 1.0);
        for (double s : r.per_pattern) {
            CHECK(s >= -1.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("cluster_error matches hand values and both overloads agree") {
    const auto sample = single_node_set({0.0, 2.0, 10.0, 12.0});
    const std::vector<AttributedGraph> centroids = {single_node(1.0), single_node(11.0)};
    const MembershipMatrix m = partition(2, {0, 0, 1, 1});
    DistanceOracle oracle;
    CHECK(cluster_error(sample, centroids, m, oracle) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(oracle.calls() == 4);
    CHECK(cluster_error({1.0, 1.0, 1.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-15));

    // perfect centroids
    DistanceOracle o2;
    const std::vector<AttributedGraph> perfect = {single_node(0.0), single_node(2.0)};
    CHECK(cluster_error(single_node_set({0.0, 2.0}), perfect, partition(2, {0, 1}), o2) == 0.0);

    CHECK_THROWS_AS(cluster_error(sample, centroids, partition(2, {0, 0, 1}), oracle),
                    DimensionError);
}

TEST_CASE("cluster_error agrees with an independent scalar objective") {
    std::mt19937_64 rng(403);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) xs.push_back((i < 10 ? 0.0 : 100.0) + noise(rng));
    const auto sample = single_node_set(xs);
    const std::vector<AttributedGraph> centroids = {single_node(0.2), single_node(99.8)};
    std::vector<std::size_t> assignment(20);
    double expected = 0.0;
    for (int i = 0; i < 20; ++i) {
        assignment[i] = i < 10 ? 0 : 1;
        const double c = i < 10 ? 0.2 : 99.8;
        expected += (xs[i] - c) * (xs[i] - c);
    }
    DistanceOracle oracle;
    CHECK(cluster_error(sample, centroids, partition(2, assignment), oracle) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("classification accuracy under the majority mapping") {
    // clusters equal to label groups
    const auto pure = single_node_set({0.0, 1.0, 10.0, 11.0}, {"a", "a", "b", "b"});
    CHECK(classification_accuracy(pure, partition(2, {0, 0, 1, 1})) == 1.0);

    // one cluster holds labels a,a,a,b: majority a -> 3 of 4 correct
    const auto split = single_node_set({0.0, 0.0, 0.0, 0.0}, {"a", "a", "a", "b"});
    CHECK(classification_accuracy(split, partition(1, {0, 0, 0, 0})) == doctest::Approx(0.75));

    // ties pick the lexicographically smallest label deterministically
    const auto tied = single_node_set({0.0, 0.0}, {"b", "a"});
    CHECK(classification_accuracy(tied, partition(1, {0, 0})) == doctest::Approx(0.5));
    const auto tied2 = single_node_set({0.0, 0.0}, {"a", "b"});
    CHECK(classification_accuracy(tied2, partition(1, {0, 0})) == doctest::Approx(0.5));

    const auto unlabeled = single_node_set({0.0, 1.0});
    CHECK_THROWS_AS(classification_accuracy(unlabeled, partition(1, {0, 0})),
                    LabelsRequiredError);
}

TEST_CASE("optimal distinct-label mapping matches brute force") {
    const auto sample = single_node_set({0, 0, 0, 1, 1, 1},
                                        {"a", "a", "b", "a", "b", "b"});
    const MembershipMatrix m = partition(2, {0, 0, 0, 1, 1, 1});
    CHECK(classification_accuracy(sample, m, LabelMapping::majority) == doctest::Approx(4.0 / 6.0));
    CHECK(classification_accuracy(sample, m, LabelMapping::optimal) == doctest::Approx(4.0 / 6.0));

    // both clusters majority-labeled 'a': majority may reuse the label,
    // the distinct mapping must spend 'b' on one of them
    const auto skew = single_node_set({0, 0, 0, 1, 1, 1},
                                      {"a", "a", "b", "a", "a", "b"});
    const MembershipMatrix ms = partition(2, {0, 0, 0, 1, 1, 1});
    CHECK(classification_accuracy(skew, ms, LabelMapping::majority) == doctest::Approx(4.0 / 6.0));
    CHECK(classification_accuracy(skew, ms, LabelMapping::optimal) == doctest::Approx(3.0 / 6.0));

    std::mt19937_64 rng(404);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 6 + rng() % 10;
        const std::size_t k = 2 + rng() % 3;
        const std::size_t label_count = 2 + rng() % 3;
        std::vector<double> xs(n, 0.0);
        std::vector<std::string> labels(n);
        std::vector<std::size_t> assignment(n);
        std::vector<std::vector<std::size_t>> counts(k,
                                                     std::vector<std::size_t>(label_count, 0));
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t l = rng() % label_count;
            labels[i] = std::string(1, static_cast<char>('a' + l));
            assignment[i] = i < k ? i : rng() % k;
            ++counts[assignment[i]][l];
        }
        const auto s = single_node_set(xs, labels);
        const double got = classification_accuracy(s, partition(k, assignment),
                                                   LabelMapping::optimal);
        CHECK(got == doctest::Approx(reference_optimal_accuracy(counts, n)).epsilon(1e-12));
        // the distinct-label constraint can only lose against free reuse
        CHECK(got <= classification_accuracy(s, partition(k, assignment),
                                             LabelMapping::majority) +
                         1e-12);
    }
}

TEST_CASE("random balanced assignment scores near one half") {
    std::mt19937_64 rng(405);
    const std::size_t n = 2000;
    std::vector<double> xs(n, 0.0);
    std::vector<std::string> labels(n);
    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i % 2 == 0 ? "a" : "b";
        assignment[i] = rng() % 2;
    }
    const double acc = classification_accuracy(single_node_set(xs, labels),
                                               partition(2, assignment));
    CHECK(acc > 0.45);
    CHECK(acc < 0.58);
}

TEST_CASE("set_distance is the minimum pairwise distance") {
    DistanceOracle oracle;
    const auto a = single_node_set({0.0, 5.0});
    const auto b = single_node_set({7.0, 20.0});
    CHECK(set_distance(a, b, oracle) == doctest::Approx(2.0).epsilon(1e-12));
    // singletons reduce to the plain distance
    CHECK(set_distance({single_node(1.0)}, {single_node(4.0)}, oracle) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(set_distance({}, b, oracle), EmptySampleError);
}
