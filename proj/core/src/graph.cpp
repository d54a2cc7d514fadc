#include "graphkm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphkm/errors.hpp"

namespace graphkm {

namespace {

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

const std::vector<double>* AttributedGraph::edge_attr(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v),
                               [](const EdgeRecord& e, const std::pair<std::size_t, std::size_t>& key) {
                                   return std::make_pair(e.u, e.v) < key;
                               });
    if (it != edges.end() && it->u == u && it->v == v) return &it->attr;
    return nullptr;
}

void validate_graph(const AttributedGraph& g) {
    if (g.order == 0) throw DimensionError("graph '" + g.id + "': order must be >= 1");
    if (g.node_attrs.size() != g.order)
        throw DimensionError("graph '" + g.id + "': expected " + std::to_string(g.order) +
                             " node attribute rows, got " + std::to_string(g.node_attrs.size()));
    for (const auto& a : g.node_attrs)
        if (a.size() != g.node_dim)
            throw DimensionError("graph '" + g.id + "': node attribute dimension mismatch");
    const EdgeRecord* prev = nullptr;
    for (const auto& e : g.edges) {
        if (e.u >= e.v)
            throw DimensionError("graph '" + g.id + "': edges must satisfy u < v");
        if (e.v >= g.order)
            throw DimensionError("graph '" + g.id + "': edge endpoint out of range");
        if (e.attr.size() != g.edge_dim)
            throw DimensionError("graph '" + g.id + "': edge attribute dimension mismatch");
        if (all_zero(e.attr))
            throw DimensionError("graph '" + g.id + "': edge attribute must be nonzero");
        if (prev && !(std::make_pair(prev->u, prev->v) < std::make_pair(e.u, e.v)))
            throw DimensionError("graph '" + g.id + "': edges must be sorted and unique");
        prev = &e;
    }
}

AttributeSpace space_of(const AttributedGraph& g) {
    return AttributeSpace{g.node_dim, g.edge_dim};
}

Representation embed(const AttributedGraph& g, const AttributeSpace& space,
                     std::size_t padded_order) {
    if (g.node_dim != space.node_dim || g.edge_dim != space.edge_dim)
        throw DimensionError("graph '" + g.id + "' does not fit the attribute space");
    if (padded_order < g.order)
        throw DimensionError("padding " + std::to_string(padded_order) +
                             " below graph order " + std::to_string(g.order));
    const std::size_t n = padded_order;
    const std::size_t d = space.dim();
    Representation x{n, d, std::vector<double>(n * n * d, 0.0)};
    for (std::size_t i = 0; i < g.order; ++i) {
        auto c = x.cell(i, i);
        std::copy(g.node_attrs[i].begin(), g.node_attrs[i].end(), c.begin());
    }
    for (const auto& e : g.edges) {
        auto c1 = x.cell(e.u, e.v);
        auto c2 = x.cell(e.v, e.u);
        std::copy(e.attr.begin(), e.attr.end(), c1.begin() + space.node_dim);
        std::copy(e.attr.begin(), e.attr.end(), c2.begin() + space.node_dim);
    }
    return x;
}

double squared_distance(const Representation& x, const Representation& y) {
    if (x.n != y.n || x.d != y.d)
        throw DimensionError("representation shape mismatch: " + std::to_string(x.n) + "x" +
                             std::to_string(x.d) + " vs " + std::to_string(y.n) + "x" +
                             std::to_string(y.d));
    double s = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double diff = x.data[i] - y.data[i];
        s += diff * diff;
    }
    return s;
}

double euclidean_distance(const Representation& x, const Representation& y) {
    return std::sqrt(squared_distance(x, y));
}

Representation permute(const Representation& x, const std::vector<std::size_t>& p) {
    if (p.size() != x.n)
        throw DimensionError("permutation size " + std::to_string(p.size()) +
                             " does not match order " + std::to_string(x.n));
    std::vector<bool> seen(x.n, false);
    for (std::size_t v : p) {
        if (v >= x.n || seen[v])
            throw DimensionError("permutation is not a bijection on [0, n)");
        seen[v] = true;
    }
    Representation y{x.n, x.d, std::vector<double>(x.data.size())};
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) {
            auto src = x.cell(p[i], p[j]);
            auto dst = y.cell(i, j);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    return y;
}

AttributedGraph graph_from_representation(const Representation& x,
                                          const AttributeSpace& space,
                                          std::string id) {
    if (x.d != space.dim())
        throw DimensionError("representation dimension does not match the attribute space");
    AttributedGraph g;
    g.id = std::move(id);
    g.order = x.n;
    g.node_dim = space.node_dim;
    g.edge_dim = space.edge_dim;
    g.node_attrs.resize(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        auto c = x.cell(i, i);
        if (!all_zero(c.subspan(space.node_dim)))
            throw DimensionError("diagonal cell carries edge-block coordinates");
        g.node_attrs[i].assign(c.begin(), c.begin() + space.node_dim);
    }
    for (std::size_t u = 0; u < x.n; ++u)
        for (std::size_t v = u + 1; v < x.n; ++v) {
            auto c = x.cell(u, v);
            auto c2 = x.cell(v, u);
            if (!std::equal(c.begin(), c.end(), c2.begin()))
                throw DimensionError("representation is not symmetric");
            if (!all_zero(c.subspan(0, space.node_dim)))
                throw DimensionError("off-diagonal cell carries node-block coordinates");
            auto e = c.subspan(space.node_dim);
            if (!all_zero(e))
                g.edges.push_back({u, v, std::vector<double>(e.begin(), e.end())});
        }
    return g;
}

AttributedGraph trim_trailing_zero_vertices(const AttributedGraph& g) {
    std::vector<bool> touched(g.order, false);
    for (std::size_t i = 0; i < g.order; ++i)
        if (!all_zero(g.node_attrs[i])) touched[i] = true;
    for (const auto& e : g.edges) {
        touched[e.u] = true;
        touched[e.v] = true;
    }
    std::size_t keep = g.order;
    while (keep > 1 && !touched[keep - 1]) --keep;
    if (keep == g.order) return g;
    AttributedGraph out = g;
    out.order = keep;
    out.node_attrs.resize(keep);
    return out;  // edges only touch kept vertices by construction
}

}  // namespace graphkm
