#pragma once

// Shared test helpers: seeded graph generators and small independent
// reference implementations that the suites use as oracles. Everything here
// is deliberately written from the definitions, not via the library's own
// search or evaluation code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <graphkm/graph.hpp>

namespace testsupport {

using graphkm::AttributedGraph;
using graphkm::EdgeRecord;

inline AttributedGraph single_node(double value, std::string id = "",
                                   std::optional<std::string> label = {}) {
    AttributedGraph g;
    g.id = std::move(id);
    g.label = std::move(label);
    g.order = 1;
    g.node_dim = 1;
    g.edge_dim = 0;
    g.node_attrs = {{value}};
    return g;
}

inline std::vector<AttributedGraph> single_node_set(const std::vector<double>& values,
                                                    const std::vector<std::string>& labels = {}) {
    std::vector<AttributedGraph> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::optional<std::string> label;
        if (!labels.empty()) label = labels[i];
        out.push_back(single_node(values[i], "g" + std::to_string(i), label));
    }
    return out;
}

// Random graph whose edge attributes start with a presence flag of 1.0,
// mirroring what dataset ingestion produces. edge_dim counts the flag.
inline AttributedGraph random_graph(std::mt19937_64& rng, std::size_t min_order,
                                    std::size_t max_order, std::size_t node_dim,
                                    std::size_t edge_dim, double edge_prob,
                                    std::string id = "") {
    std::uniform_int_distribution<std::size_t> ord(min_order, max_order);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution has_edge(edge_prob);
    AttributedGraph g;
    g.id = std::move(id);
    g.order = ord(rng);
    g.node_dim = node_dim;
    g.edge_dim = edge_dim;
    for (std::size_t i = 0; i < g.order; ++i) {
        std::vector<double> attr(node_dim);
        for (double& a : attr) a = val(rng);
        g.node_attrs.push_back(std::move(attr));
    }
    for (std::size_t u = 0; u + 1 < g.order; ++u)
        for (std::size_t v = u + 1; v < g.order; ++v) {
            if (!has_edge(rng)) continue;
            EdgeRecord e;
            e.u = u;
            e.v = v;
            e.attr.assign(edge_dim, 0.0);
            e.attr[0] = 1.0;
            for (std::size_t t = 1; t < edge_dim; ++t) e.attr[t] = val(rng);
            g.edges.push_back(std::move(e));
        }
    return g;
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// Vertex relabeling: vertex i of the result carries vertex p[i] of g, the
// same convention as the representation-level permute.
inline AttributedGraph permute_graph(const AttributedGraph& g, const std::vector<std::size_t>& p) {
    std::vector<std::size_t> inverse(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inverse[p[i]] = i;
    AttributedGraph out;
    out.id = g.id;
    out.label = g.label;
    out.order = g.order;
    out.node_dim = g.node_dim;
    out.edge_dim = g.edge_dim;
    for (std::size_t i = 0; i < g.order; ++i) out.node_attrs.push_back(g.node_attrs[p[i]]);
    for (const auto& e : g.edges) {
        EdgeRecord m;
        m.u = std::min(inverse[e.u], inverse[e.v]);
        m.v = std::max(inverse[e.u], inverse[e.v]);
        m.attr = e.attr;
        out.edges.push_back(std::move(m));
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
        return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
    });
    return out;
}

// Exhaustive reference for the graph metric: embeds both graphs by hand at
// the common padded order and minimizes the Euclidean distance over every
// vertex permutation. Factorial cost; keep orders small.
inline double reference_distance(const AttributedGraph& x, const AttributedGraph& y) {
    const std::size_t dv = x.node_dim;
    const std::size_t de = x.edge_dim;
    const std::size_t d = dv + de;
    const std::size_t n = std::max(x.order, y.order);

    auto table = [&](const AttributedGraph& g) {
        std::vector<double> a(n * n * d, 0.0);
        for (std::size_t i = 0; i < g.order; ++i)
            for (std::size_t t = 0; t < dv; ++t) a[(i * n + i) * d + t] = g.node_attrs[i][t];
        for (const auto& e : g.edges)
            for (std::size_t t = 0; t < de; ++t) {
                a[(e.u * n + e.v) * d + dv + t] = e.attr[t];
                a[(e.v * n + e.u) * d + dv + t] = e.attr[t];
            }
        return a;
    };
    const std::vector<double> ax = table(x);
    const std::vector<double> ay = table(y);

    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t t = 0; t < d; ++t) {
                    const double diff = ax[(i * n + j) * d + t] - ay[(p[i] * n + p[j]) * d + t];
                    cost += diff * diff;
                }
        best = std::min(best, cost);
    } while (std::next_permutation(p.begin(), p.end()));
    return std::sqrt(best);
}

// Straight-from-the-formulas silhouette for scalar points under |.|;
// singleton clusters and 0/0 both score zero.
inline double scalar_silhouette(const std::vector<double>& xs,
                                const std::vector<std::size_t>& labels, std::size_t k) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t l : labels) ++sizes[l];

    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = labels[i];
        if (sizes[own] <= 1) continue;
        double a = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && labels[j] == own) a += std::abs(xs[i] - xs[j]);
        a /= static_cast<double>(sizes[own] - 1);

        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own || sizes[c] == 0) continue;
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (labels[j] == c) sum += std::abs(xs[i] - xs[j]);
            b = std::min(b, sum / static_cast<double>(sizes[c]));
        }
        const double m = std::max(a, b);
        s[i] = m == 0.0 ? 0.0 : (b - a) / m;
    }

    double index = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == c) sum += s[i];
        index += sum / static_cast<double>(sizes[c]);
    }
    return index / static_cast<double>(k);
}

// Best accuracy over every injective cluster-to-label mapping, by brute
// force over label permutations. counts[c][l] = patterns of label l in
// cluster c; assumes max(k, labels) small.
inline double reference_optimal_accuracy(const std::vector<std::vector<std::size_t>>& counts,
                                         std::size_t total) {
    const std::size_t k = counts.size();
    const std::size_t labels = counts.empty() ? 0 : counts[0].size();
    const std::size_t m = std::max(k, labels);
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t c = 0; c < k; ++c)
            if (p[c] < labels) hit += counts[c][p[c]];
        best = std::max(best, hit);
    } while (std::next_permutation(p.begin(), p.end()));
    return static_cast<double>(best) / static_cast<double>(total);
}

}  // namespace testsupport
