#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <graphkm/errors.hpp>
#include <graphkm/matcher.hpp>

#include "support.hpp"

using namespace graphkm;
using namespace testsupport;

TEST_CASE("exact distance equals the exhaustive-permutation reference") {
    std::mt19937_64 rng(101);
    for (int it = 0; it < 60; ++it) {
        const AttributedGraph a = random_graph(rng, 1, 4, 2, 2, 0.5);
        const AttributedGraph b = random_graph(rng, 1, 4, 2, 2, 0.5);
        const Alignment al = distance_exact(a, b);
        CHECK(al.exact);
        CHECK(al.distance == doctest::Approx(reference_distance(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("reported distance is realized by the reported permutation") {
    std::mt19937_64 rng(102);
    for (int it = 0; it < 30; ++it) {
        const AttributedGraph a = random_graph(rng, 2, 5, 2, 2, 0.5);
        const AttributedGraph b = random_graph(rng, 2, 5, 2, 2, 0.5);
        const Alignment al = distance_exact(a, b);
        const AttributeSpace space = space_of(a);
        const std::size_t n = std::max(a.order, b.order);
        const double realized =
            euclidean_distance(embed(a, space, n), permute(embed(b, space, n), al.permutation));
        CHECK(al.distance == doctest::Approx(realized).epsilon(1e-12));
    }
}

TEST_CASE("self distance is zero with the identity alignment") {
    std::mt19937_64 rng(103);
    const AttributedGraph g = random_graph(rng, 4, 4, 2, 2, 0.7);
    const Alignment al = distance_exact(g, g);
    CHECK(al.distance == 0.0);
    std::vector<std::size_t> identity(g.order);
    std::iota(identity.begin(), identity.end(), 0);
    CHECK(al.permutation == identity);
}

TEST_CASE("isomorphic graphs are at distance zero") {
    std::mt19937_64 rng(104);
    for (int it = 0; it < 20; ++it) {
        const AttributedGraph g = random_graph(rng, 2, 5, 2, 2, 0.5);
        const AttributedGraph h = permute_graph(g, random_permutation(rng, g.order));
        CHECK(distance_exact(g, h).distance <= 1e-9);
    }
}

TEST_CASE("swapped isolated nodes match at distance zero") {
    AttributedGraph x;
    x.order = 2;
    x.node_dim = 2;
    x.edge_dim = 0;
    x.node_attrs = {{1.0, 0.0}, {2.0, 0.0}};
    AttributedGraph y = x;
    std::swap(y.node_attrs[0], y.node_attrs[1]);

    const Alignment al = distance_exact(x, y);
    CHECK(al.distance == 0.0);
    CHECK(al.permutation == std::vector<std::size_t>{1, 0});
}

TEST_CASE("order mismatch pads the smaller graph") {
    // single node 3 against nodes {4, 3}: matching 3 to 3 leaves the padded
    // vertex against 4 (cost 16); matching 3 to 4 leaves it against 3
    // (cost 1 + 9), so the metric prefers the seemingly worse node match.
    const std::vector<AttributedGraph> s = single_node_set({3.0});
    AttributedGraph y;
    y.order = 2;
    y.node_dim = 1;
    y.edge_dim = 0;
    y.node_attrs = {{4.0}, {3.0}};
    const Alignment al = distance_exact(s[0], y);
    CHECK(al.distance == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
    CHECK(al.distance == doctest::Approx(reference_distance(s[0], y)).epsilon(1e-12));
}

TEST_CASE("metric axioms hold on random triples") {
    std::mt19937_64 rng(105);
    for (int it = 0; it < 25; ++it) {
        const AttributedGraph a = random_graph(rng, 1, 4, 2, 2, 0.4);
        const AttributedGraph b = random_graph(rng, 1, 4, 2, 2, 0.4);
        const AttributedGraph c = random_graph(rng, 1, 4, 2, 2, 0.4);
        const double ab = distance_exact(a, b).distance;
        const double ba = distance_exact(b, a).distance;
        const double bc = distance_exact(b, c).distance;
        const double ac = distance_exact(a, c).distance;
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - ba) <= 1e-9);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("diagonal lookahead changes pruning, never the distance") {
    std::mt19937_64 rng(106);
    BnbOptions lookahead;
    lookahead.diagonal_lookahead = true;
    for (int it = 0; it < 25; ++it) {
        const AttributedGraph a = random_graph(rng, 2, 5, 2, 2, 0.5);
        const AttributedGraph b = random_graph(rng, 2, 5, 2, 2, 0.5);
        CHECK(distance_exact(a, b).distance ==
              doctest::Approx(distance_exact(a, b, lookahead).distance).epsilon(1e-12));
    }
}

TEST_CASE("scale guard refuses large orders") {
    std::mt19937_64 rng(107);
    const AttributedGraph a = random_graph(rng, 4, 4, 1, 1, 0.5);
    const AttributedGraph b = random_graph(rng, 4, 4, 1, 1, 0.5);
    BnbOptions guard;
    guard.max_order = 3;
    CHECK_THROWS_AS(distance_exact(a, b, guard), ScaleGuardError);
    guard.max_order = 4;
    CHECK_NOTHROW(distance_exact(a, b, guard));
}

TEST_CASE("mismatched attribute spaces are rejected") {
    std::mt19937_64 rng(108);
    const AttributedGraph a = random_graph(rng, 2, 3, 2, 2, 0.5);
    const AttributedGraph b = random_graph(rng, 2, 3, 1, 2, 0.5);
    CHECK_THROWS_AS(distance_exact(a, b), DimensionError);
}

TEST_CASE("graduated assignment upper-bounds the exact distance") {
    std::mt19937_64 rng(109);
    for (int it = 0; it < 25; ++it) {
        const AttributedGraph a = random_graph(rng, 2, 5, 2, 2, 0.5);
        const AttributedGraph b = random_graph(rng, 2, 5, 2, 2, 0.5);
        const Alignment exact = distance_exact(a, b);
        const Alignment soft = distance_ga(a, b);
        CHECK_FALSE(soft.exact);
        CHECK(soft.distance >= exact.distance - 1e-9);

        const AttributeSpace space = space_of(a);
        const std::size_t n = std::max(a.order, b.order);
        const double realized =
            euclidean_distance(embed(a, space, n), permute(embed(b, space, n), soft.permutation));
        CHECK(soft.distance == doctest::Approx(realized).epsilon(1e-12));
    }
}

TEST_CASE("graduated assignment is tight on isomorphic pairs at unit scale") {
    // the annealing schedule starts soft only while beta0 * Q stays small, so
    // tightness is expected for O(1) attributes; large attribute magnitudes
    // make the first sweep effectively hard and can lock in a bad match.
    AttributedGraph g;
    g.order = 3;
    g.node_dim = 1;
    g.edge_dim = 1;
    g.node_attrs = {{0.0}, {1.0}, {2.0}};
    g.edges = {{0, 1, {1.0}}, {1, 2, {1.0}}};
    std::mt19937_64 rng(110);
    const AttributedGraph h = permute_graph(g, random_permutation(rng, 3));
    CHECK(distance_ga(g, h).distance <= 1e-9);

    for (int it = 0; it < 40; ++it) {
        const AttributedGraph a = random_graph(rng, 3, 5, 2, 2, 0.6);
        const AttributedGraph b = permute_graph(a, random_permutation(rng, a.order));
        CHECK(distance_ga(a, b).distance <= 1e-9);
    }
}

TEST_CASE("ga parameter validation") {
    GaParams p;
    CHECK_NOTHROW(p.validate());
    p.beta_rate = 0.9;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("oracle counts calls and memoizes only identified graphs") {
    std::mt19937_64 rng(111);
    AttributedGraph a = random_graph(rng, 3, 3, 2, 2, 0.5, "a");
    AttributedGraph b = random_graph(rng, 3, 3, 2, 2, 0.5, "b");

    DistanceOracle plain(MatcherKind::exact);
    plain.distance(a, b);
    plain.distance(a, b);
    CHECK(plain.calls() == 2);
    CHECK(plain.memo_hits() == 0);

    DistanceOracle memo(MatcherKind::exact, GaParams{}, true);
    const Alignment first = memo.distance(a, b);
    const Alignment again = memo.distance(a, b);
    CHECK(memo.calls() == 1);
    CHECK(memo.memo_hits() == 1);
    CHECK(first.distance == again.distance);
    CHECK(first.permutation == again.permutation);

    // swapped arguments reuse the entry with the inverse permutation
    const Alignment swapped = memo.distance(b, a);
    CHECK(memo.calls() == 1);
    CHECK(memo.memo_hits() == 2);
    CHECK(swapped.distance == first.distance);
    const AttributeSpace space = space_of(a);
    const std::size_t n = std::max(a.order, b.order);
    const double realized = euclidean_distance(embed(b, space, n),
                                               permute(embed(a, space, n), swapped.permutation));
    CHECK(swapped.distance == doctest::Approx(realized).epsilon(1e-12));

    // transient graphs (empty id) stay uncached
    AttributedGraph anon = a;
    anon.id.clear();
    memo.distance(anon, b);
    memo.distance(anon, b);
    CHECK(memo.calls() == 3);

    memo.reset_counters();
    CHECK(memo.calls() == 0);
    CHECK(memo.memo_hits() == 0);
}

TEST_CASE("inter_centroid_distances fills a symmetric zero-diagonal matrix") {
    std::mt19937_64 rng(112);
    std::vector<AttributedGraph> cs;
    for (int j = 0; j < 4; ++j) cs.push_back(random_graph(rng, 2, 3, 2, 2, 0.5));
    DistanceOracle oracle(MatcherKind::exact);
    const auto m = inter_centroid_distances(cs, oracle);
    CHECK(oracle.calls() == 6);  // k(k-1)/2
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m[i][i] == 0.0);
        for (std::size_t j = 0; j < 4; ++j) CHECK(m[i][j] == m[j][i]);
    }
}
