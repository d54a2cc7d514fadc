#include "graphkm/manifest.hpp"

#include <fstream>

#include "graphkm/errors.hpp"

namespace graphkm {

std::string manifest_to_text(const Json& manifest) {
    return manifest.dump(2) + "\n";
}

void save_manifest(const std::filesystem::path& path, const Json& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << manifest_to_text(manifest);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Json load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Json graph_to_json(const AttributedGraph& g) {
    Json j;
    j["id"] = g.id;
    if (g.label)
        j["label"] = *g.label;
    else
        j["label"] = nullptr;
    j["order"] = g.order;
    j["node_dim"] = g.node_dim;
    j["edge_dim"] = g.edge_dim;
    j["nodes"] = g.node_attrs;
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back(Json::array({e.u, e.v, e.attr}));
    j["edges"] = std::move(edges);
    return j;
}

AttributedGraph graph_from_json(const Json& j) {
    try {
        AttributedGraph g;
        g.id = j.at("id").get<std::string>();
        if (!j.at("label").is_null()) g.label = j.at("label").get<std::string>();
        g.order = j.at("order").get<std::size_t>();
        g.node_dim = j.at("node_dim").get<std::size_t>();
        g.edge_dim = j.at("edge_dim").get<std::size_t>();
        g.node_attrs = j.at("nodes").get<std::vector<std::vector<double>>>();
        for (const auto& e : j.at("edges")) {
            EdgeRecord rec;
            rec.u = e.at(0).get<std::size_t>();
            rec.v = e.at(1).get<std::size_t>();
            rec.attr = e.at(2).get<std::vector<double>>();
            g.edges.push_back(std::move(rec));
        }
        validate_graph(g);
        return g;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad graph record in manifest: ") + e.what());
    }
}

Speedup speedup_between(const Json& baseline, const Json& candidate) {
    try {
        const auto& b = baseline.at("result");
        const auto& c = candidate.at("result");
        Speedup s;
        s.total = b.at("matchings_total").get<double>() / c.at("matchings_total").get<double>();
        s.per_iteration = b.at("matchings_per_iteration").get<double>() /
                          c.at("matchings_per_iteration").get<double>();
        return s;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("manifest misses result counters: ") + e.what());
    }
}

}  // namespace graphkm
