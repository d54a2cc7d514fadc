#ifndef GRAPHKM_DATASET_IO_HPP
#define GRAPHKM_DATASET_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphkm/graph.hpp"

namespace graphkm {

// Header of the line-delimited dataset format (see docs/formats.md).
// node_dim/edge_dim describe the stored attribute vectors. When
// node_categories (edge_categories) is nonzero the stored node (edge)
// attribute is a single categorical index that the loader expands 1-of-k.
// `applied` lists transforms already baked into the stored data, preventing
// double application on reload.
struct DatasetHeader {
    std::size_t node_dim = 0;
    std::size_t edge_dim = 0;
    std::size_t node_categories = 0;
    std::size_t edge_categories = 0;
    bool onehot_applied = false;
    bool edge_flag_applied = false;
};

struct DatasetStats {
    std::size_t graphs = 0;
    std::size_t classes = 0;
    double avg_nodes = 0.0;
    std::size_t max_nodes = 0;
    double avg_edges = 0.0;
    std::size_t max_edges = 0;
};

struct Dataset {
    DatasetHeader header;        // post-transform view of the data in memory
    AttributeSpace space;        // node_dim x (edge_dim + presence flag)
    std::vector<AttributedGraph> graphs;
    DatasetStats stats;
    std::string checksum;        // FNV-1a of the file bytes, hex
};

// Parses and validates a dataset file, then applies the standard transform
// chain (1-of-k expansion of categorical attributes, presence-flag prepend on
// edge attributes) unless the header marks it applied. Throws ParseError with
// a line number on malformed text, DimensionError on schema violations, and
// EmptySampleError when the file holds no graphs.
Dataset load_dataset(const std::filesystem::path& path);

// Writes graphs in the dataset format. The header must describe the graphs
// as stored; reals are written with 17 significant digits so a reload is
// bit-exact.
void save_dataset(const std::filesystem::path& path, const DatasetHeader& header,
                  const std::vector<AttributedGraph>& graphs);

DatasetStats compute_stats(const std::vector<AttributedGraph>& graphs);

// One line per Table-style statistics column.
std::string format_stats(const DatasetStats& s);

// FNV-1a 64-bit checksum of a file's bytes, as lowercase hex.
std::string file_checksum(const std::filesystem::path& path);

// Converts a GXL graph collection (a .cxl index naming .gxl files with class
// labels, as distributed by public graph repositories) into the dataset
// format. Numeric node/edge attributes pass through in first-seen order;
// string attributes become categorical indices with the dictionary sizes
// recorded in the header. Returns the number of graphs written.
std::size_t convert_gxl_collection(const std::filesystem::path& cxl_index,
                                   const std::filesystem::path& output);

}  // namespace graphkm

#endif
