#include <doctest.h>

#include <cmath>
#include <random>

#include <graphkm/errors.hpp>
#include <graphkm/graph.hpp>

#include "support.hpp"

using namespace graphkm;
using namespace testsupport;

namespace {

AttributedGraph two_node_graph(double a0, double a1, double w) {
    AttributedGraph g;
    g.id = "t";
    g.order = 2;
    g.node_dim = 1;
    g.edge_dim = 1;
    g.node_attrs = {{a0}, {a1}};
    g.edges = {{0, 1, {w}}};
    return g;
}

}  // namespace

TEST_CASE("embed places node attrs on the diagonal and edge attrs off it") {
    const AttributedGraph g = two_node_graph(3.0, 5.0, 7.0);
    const AttributeSpace space = space_of(g);
    CHECK(space.node_dim == 1);
    CHECK(space.edge_dim == 1);
    const Representation r = embed(g, space, 2);
    REQUIRE(r.n == 2);
    REQUIRE(r.d == 2);

    // diagonal cells: (node value, 0)
    CHECK(r.cell(0, 0)[0] == 3.0);
    CHECK(r.cell(0, 0)[1] == 0.0);
    CHECK(r.cell(1, 1)[0] == 5.0);
    CHECK(r.cell(1, 1)[1] == 0.0);
    // symmetric off-diagonal cells: (0, edge value)
    CHECK(r.cell(0, 1)[0] == 0.0);
    CHECK(r.cell(0, 1)[1] == 7.0);
    CHECK(r.cell(1, 0)[1] == 7.0);

    // column-major flattening
    CHECK(r.offset(1, 0) == 1 * r.d);
    CHECK(r.offset(0, 1) == 2 * r.d);
    CHECK(r.data[r.offset(1, 1)] == 5.0);
}

TEST_CASE("padding adds zero cells only and embedding below order throws") {
    const AttributedGraph g = two_node_graph(1.0, 2.0, 3.0);
    const Representation r3 = embed(g, space_of(g), 3);
    REQUIRE(r3.n == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (double v : r3.cell(i, 2)) CHECK(v == 0.0);
        for (double v : r3.cell(2, i)) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(embed(g, space_of(g), 1), DimensionError);
}

TEST_CASE("padding does not change distances at a common order") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 20; ++it) {
        const AttributedGraph a = random_graph(rng, 2, 4, 2, 2, 0.5);
        const AttributedGraph b = random_graph(rng, 2, 4, 2, 2, 0.5);
        const AttributeSpace space = space_of(a);
        const std::size_t n = std::max(a.order, b.order);
        const double base =
            euclidean_distance(embed(a, space, n), embed(b, space, n));
        const double padded =
            euclidean_distance(embed(a, space, n + 2), embed(b, space, n + 2));
        CHECK(base == doctest::Approx(padded).epsilon(1e-12));
    }
}

TEST_CASE("permute composes, preserves norms and identity is neutral") {
    std::mt19937_64 rng(7);
    const AttributedGraph g = random_graph(rng, 4, 4, 2, 2, 0.6);
    const Representation r = embed(g, space_of(g), 4);

    const std::vector<std::size_t> identity{0, 1, 2, 3};
    CHECK(euclidean_distance(permute(r, identity), r) == 0.0);

    const std::vector<std::size_t> p = random_permutation(rng, 4);
    const Representation rp = permute(r, p);
    CHECK(squared_distance(rp, rp) == 0.0);
    double norm = 0.0, norm_p = 0.0;
    for (double v : r.data) norm += v * v;
    for (double v : rp.data) norm_p += v * v;
    CHECK(norm == doctest::Approx(norm_p).epsilon(1e-12));

    // inverse undoes
    std::vector<std::size_t> inv(4);
    for (std::size_t i = 0; i < 4; ++i) inv[p[i]] = i;
    CHECK(euclidean_distance(permute(rp, inv), r) == 0.0);

    CHECK_THROWS_AS(permute(r, {0, 0, 1, 2}), DimensionError);
}

TEST_CASE("representation permute agrees with graph-level vertex relabeling") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 10; ++it) {
        const AttributedGraph g = random_graph(rng, 3, 5, 2, 2, 0.5);
        const std::vector<std::size_t> p = random_permutation(rng, g.order);
        const AttributedGraph h = permute_graph(g, p);
        const AttributeSpace space = space_of(g);
        const double diff = euclidean_distance(permute(embed(g, space, g.order), p),
                                               embed(h, space, h.order));
        CHECK(diff == 0.0);
    }
}

TEST_CASE("graph_from_representation round-trips embed") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 10; ++it) {
        const AttributedGraph g = random_graph(rng, 1, 5, 2, 3, 0.5, "g");
        const AttributeSpace space = space_of(g);
        const AttributedGraph back =
            graph_from_representation(embed(g, space, g.order), space, "g");
        CHECK(back.order == g.order);
        CHECK(back.node_attrs == g.node_attrs);
        REQUIRE(back.edges.size() == g.edges.size());
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            CHECK(back.edges[e].u == g.edges[e].u);
            CHECK(back.edges[e].v == g.edges[e].v);
            CHECK(back.edges[e].attr == g.edges[e].attr);
        }
    }
}

TEST_CASE("graph_from_representation rejects block inconsistencies") {
    const AttributedGraph g = two_node_graph(1.0, 2.0, 3.0);
    const AttributeSpace space = space_of(g);
    Representation r = embed(g, space, 2);
    SUBCASE("asymmetric off-diagonal") {
        r.cell(0, 1)[1] = 99.0;
        CHECK_THROWS_AS(graph_from_representation(r, space, "x"), DimensionError);
    }
    SUBCASE("node coordinates off the diagonal") {
        r.cell(0, 1)[0] = 1.0;
        r.cell(1, 0)[0] = 1.0;
        CHECK_THROWS_AS(graph_from_representation(r, space, "x"), DimensionError);
    }
    SUBCASE("edge coordinates on the diagonal") {
        r.cell(0, 0)[1] = 1.0;
        CHECK_THROWS_AS(graph_from_representation(r, space, "x"), DimensionError);
    }
}

TEST_CASE("trim_trailing_zero_vertices removes padding and keeps order >= 1") {
    const AttributedGraph g = two_node_graph(1.0, 2.0, 3.0);
    const AttributeSpace space = space_of(g);
    const AttributedGraph padded = graph_from_representation(embed(g, space, 5), space, "p");
    CHECK(padded.order == 5);
    const AttributedGraph trimmed = trim_trailing_zero_vertices(padded);
    CHECK(trimmed.order == 2);
    CHECK(trimmed.node_attrs == g.node_attrs);
    CHECK(trimmed.edges.size() == 1);

    AttributedGraph zero;
    zero.order = 3;
    zero.node_dim = 1;
    zero.edge_dim = 0;
    zero.node_attrs = {{0.0}, {0.0}, {0.0}};
    CHECK(trim_trailing_zero_vertices(zero).order == 1);
}

TEST_CASE("validate_graph enforces the structural invariants") {
    AttributedGraph g = two_node_graph(1.0, 2.0, 3.0);
    CHECK_NOTHROW(validate_graph(g));

    SUBCASE("zero order") {
        g.order = 0;
        g.node_attrs.clear();
        g.edges.clear();
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("node dim mismatch") {
        g.node_attrs[0] = {1.0, 2.0};
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("edge endpoint out of range") {
        g.edges[0].v = 5;
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("self loop") {
        g.edges[0].v = 0;
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("duplicate edge") {
        g.edges.push_back(g.edges[0]);
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("zero edge attribute") {
        g.edges[0].attr = {0.0};
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
    SUBCASE("unsorted edges") {
        g.order = 3;
        g.node_attrs.push_back({4.0});
        g.edges = {{1, 2, {1.0}}, {0, 1, {1.0}}};
        CHECK_THROWS_AS(validate_graph(g), DimensionError);
    }
}

TEST_CASE("euclidean_distance matches a hand computation and shape checks") {
    const AttributedGraph a = two_node_graph(0.0, 0.0, 1.0);
    const AttributedGraph b = two_node_graph(3.0, 4.0, 1.0);
    const AttributeSpace space = space_of(a);
    // diff: diagonal (3,0) and (4,0), edges equal -> sqrt(9 + 16) = 5
    CHECK(euclidean_distance(embed(a, space, 2), embed(b, space, 2)) ==
          doctest::Approx(5.0).epsilon(1e-15));
    CHECK(squared_distance(embed(a, space, 2), embed(b, space, 2)) ==
          doctest::Approx(25.0).epsilon(1e-15));
    CHECK_THROWS_AS(euclidean_distance(embed(a, space, 2), embed(b, space, 3)), DimensionError);
}

TEST_CASE("space_of rejects nothing and edge_attr looks up both orientations") {
    const AttributedGraph g = two_node_graph(1.0, 2.0, 3.0);
    REQUIRE(g.edge_attr(0, 1) != nullptr);
    CHECK((*g.edge_attr(0, 1))[0] == 3.0);
    REQUIRE(g.edge_attr(1, 0) != nullptr);
    CHECK(g.edge_attr(1, 1) == nullptr);
}
