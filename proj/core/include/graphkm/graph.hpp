#ifndef GRAPHKM_GRAPH_HPP
#define GRAPHKM_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace graphkm {

// Undirected edge with its attribute vector. Kept with u < v; the attribute
// must be a nonzero vector so that absent edges (all-zero cells) stay
// distinguishable after embedding. Ingestion guarantees this by prepending a
// presence flag of 1.0 to every raw edge attribute.
struct EdgeRecord {
    std::size_t u = 0;
    std::size_t v = 0;
    std::vector<double> attr;
};

// Finite undirected graph with real-valued node and edge attributes.
// Treated as immutable once built; all algorithms take it by const reference.
struct AttributedGraph {
    std::string id;
    std::optional<std::string> label;
    std::size_t order = 0;
    std::size_t node_dim = 0;
    std::size_t edge_dim = 0;
    std::vector<std::vector<double>> node_attrs;  // order x node_dim
    std::vector<EdgeRecord> edges;                // sorted by (u, v), unique

    // Pointer to the attribute vector of edge {u, v}, or nullptr if absent.
    const std::vector<double>* edge_attr(std::size_t u, std::size_t v) const;
};

// Checks the structural invariants (order >= 1, attribute dimensions,
// sorted unique edges, nonzero edge attributes, index ranges).
// Throws DimensionError on violation.
void validate_graph(const AttributedGraph& g);

// Unified attribute space: node attributes occupy the first node_dim
// coordinates of R^d, edge attributes the remaining edge_dim. The two blocks
// are disjoint, so node and edge cells are never conflated by the metric.
struct AttributeSpace {
    std::size_t node_dim = 0;
    std::size_t edge_dim = 0;

    std::size_t dim() const { return node_dim + edge_dim; }
    bool operator==(const AttributeSpace&) const = default;
};

// Attribute space a graph embeds into.
AttributeSpace space_of(const AttributedGraph& g);

// Vector representation of a graph: an n x n matrix of d-dimensional cells,
// flattened column major. Cell (i, i) carries the embedded node attribute of
// vertex i, cell (i, j), i != j, the embedded edge attribute (all-zero when
// the edge is absent). Two representations describe the same graph exactly
// when one is a simultaneous row/column permutation of the other.
struct Representation {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> data;  // n * n * d values

    std::size_t offset(std::size_t i, std::size_t j) const {
        return (j * n + i) * d;
    }
    std::span<const double> cell(std::size_t i, std::size_t j) const {
        return {data.data() + offset(i, j), d};
    }
    std::span<double> cell(std::size_t i, std::size_t j) {
        return {data.data() + offset(i, j), d};
    }
};

// Embeds g into `space` at order padded_order >= g.order. Vertices past
// g.order are padding: every cell they touch is zero. Padding a graph does
// not change distances computed at a common order.
// Throws DimensionError if the graph does not fit the space or the padding
// is smaller than the graph's order.
Representation embed(const AttributedGraph& g, const AttributeSpace& space,
                     std::size_t padded_order);

// Euclidean distance / squared distance between two flattened
// representations of identical shape.
double euclidean_distance(const Representation& x, const Representation& y);
double squared_distance(const Representation& x, const Representation& y);

// Applies a vertex permutation: cell (i, j) of the result equals cell
// (p[i], p[j]) of the input. Applying the inverse permutation undoes it.
// Throws DimensionError if p is not a bijection on [0, n).
Representation permute(const Representation& x, const std::vector<std::size_t>& p);

// Reads a graph back out of a representation: diagonal cells become node
// attributes (first node_dim coordinates), nonzero off-diagonal cells become
// edges (last edge_dim coordinates). Off-diagonal node-block coordinates and
// diagonal edge-block coordinates must be zero.
AttributedGraph graph_from_representation(const Representation& x,
                                          const AttributeSpace& space,
                                          std::string id);

// Drops trailing vertices whose diagonal and incident cells are all zero
// (never below order 1). Used to trim padding off computed mean graphs.
AttributedGraph trim_trailing_zero_vertices(const AttributedGraph& g);

}  // namespace graphkm

#endif
