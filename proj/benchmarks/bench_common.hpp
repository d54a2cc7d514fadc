#pragma once

#include <random>
#include <string>
#include <vector>

#include <graphkm/graph.hpp>

namespace benchsupport {

// Random attributed graph of a fixed order; edge attributes lead with the
// presence flag, matching dataset ingestion.
inline graphkm::AttributedGraph random_graph(std::mt19937_64& rng, std::size_t order,
                                             std::size_t node_dim, std::size_t edge_dim,
                                             double edge_prob, std::string id = "") {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution has_edge(edge_prob);
    graphkm::AttributedGraph g;
    g.id = std::move(id);
    g.order = order;
    g.node_dim = node_dim;
    g.edge_dim = edge_dim;
    for (std::size_t i = 0; i < order; ++i) {
        std::vector<double> attr(node_dim);
        for (double& a : attr) a = val(rng);
        g.node_attrs.push_back(std::move(attr));
    }
    for (std::size_t u = 0; u + 1 < order; ++u)
        for (std::size_t v = u + 1; v < order; ++v) {
            if (!has_edge(rng)) continue;
            graphkm::EdgeRecord e;
            e.u = u;
            e.v = v;
            e.attr.assign(edge_dim, 0.0);
            e.attr[0] = 1.0;
            for (std::size_t t = 1; t < edge_dim; ++t) e.attr[t] = val(rng);
            g.edges.push_back(std::move(e));
        }
    return g;
}

// Well-separated blobs of perturbed prototypes, one label per blob.
inline std::vector<graphkm::AttributedGraph> blob_sample(std::uint64_t seed, std::size_t blobs,
                                                         std::size_t per_blob, std::size_t order,
                                                         double spread) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, spread);
    std::vector<graphkm::AttributedGraph> out;
    for (std::size_t b = 0; b < blobs; ++b) {
        graphkm::AttributedGraph proto = random_graph(rng, order, 2, 2, 0.7);
        for (auto& attr : proto.node_attrs) attr[0] += 50.0 * static_cast<double>(b);
        for (std::size_t i = 0; i < per_blob; ++i) {
            graphkm::AttributedGraph g = proto;
            for (auto& attr : g.node_attrs)
                for (double& v : attr) v += jitter(rng);
            g.id = "b" + std::to_string(b) + "_" + std::to_string(i);
            g.label = "c" + std::to_string(b);
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace benchsupport
