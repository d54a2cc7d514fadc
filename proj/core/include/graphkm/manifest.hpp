#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "graphkm/graph.hpp"

namespace graphkm {

// Manifests use insertion-ordered JSON so that identical runs serialize to
// identical bytes. Keys are emitted in a fixed order, no timestamps or host
// details are recorded, and doubles round-trip exactly.
using Json = nlohmann::ordered_json;

// Canonical text form: 2-space indent plus a trailing newline.
std::string manifest_to_text(const Json& manifest);

void save_manifest(const std::filesystem::path& path, const Json& manifest);
Json load_manifest(const std::filesystem::path& path);

Json graph_to_json(const AttributedGraph& g);
AttributedGraph graph_from_json(const Json& j);

// speedup = baseline matchings / this run's matchings, from the
// "result" blocks of two cluster manifests.
struct Speedup {
    double total = 0.0;
    double per_iteration = 0.0;
};
Speedup speedup_between(const Json& baseline, const Json& candidate);

}  // namespace graphkm
