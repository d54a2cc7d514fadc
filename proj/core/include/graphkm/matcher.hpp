#ifndef GRAPHKM_MATCHER_HPP
#define GRAPHKM_MATCHER_HPP

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "graphkm/graph.hpp"

namespace graphkm {

// Result of matching graph y against graph x at a common padded order n.
// permutation[i] is the vertex of y matched to vertex i of x, i.e.
// distance == euclidean_distance(embed(x), permute(embed(y), permutation)).
// exact is true when the distance is the true graph metric, false for the
// graduated-assignment upper bound.
struct Alignment {
    std::vector<std::size_t> permutation;
    double distance = 0.0;
    bool exact = true;
};

// Branch-and-bound knobs. The default admissible completion bound is zero;
// diagonal_lookahead adds the sum over unassigned pattern vertices of their
// cheapest remaining diagonal match, which is still admissible and prunes
// more at the cost of a precomputed n x n table.
struct BnbOptions {
    std::size_t max_order = 0;       // 0 = unguarded; otherwise throws ScaleGuardError
    bool diagonal_lookahead = false;
};

// Annealing schedule for graduated assignment (softassign with Sinkhorn
// normalization). Defaults follow the usual schedule for this matcher.
struct GaParams {
    double beta0 = 0.5;
    double beta_rate = 1.075;
    double beta_max = 10.0;
    int sinkhorn_iters = 30;
    double sinkhorn_tol = 1e-6;
    int outer_iters = 4;

    void validate() const;  // throws ConfigError
};

// Exact graph distance by depth-first branch-and-bound over vertex
// permutations at the pairwise padded order max(x.order, y.order).
// Pattern (x) vertices are expanded in decreasing node-attribute-norm order,
// candidate y vertices in increasing index; partial assignments are pruned
// once their cost reaches the incumbent. The incumbent is seeded with the
// identity permutation, so ties resolve deterministically and a self match
// returns the identity.
Alignment distance_exact(const AttributedGraph& x, const AttributedGraph& y,
                         const BnbOptions& opts = {});

// Graduated-assignment approximation of the same distance: anneals a soft
// doubly stochastic match matrix, then discretizes greedily by largest
// entry. The reported distance is the exact cost of the discretized
// permutation, hence always an upper bound of the true metric; exact=false.
// Throws AnnealingDivergedError if normalization produces non-finite values.
Alignment distance_ga(const AttributedGraph& x, const AttributedGraph& y,
                      const GaParams& params = {});

enum class MatcherKind { exact, graduated_assignment };

// Counts every distance computation and optionally memoizes alignments by
// unordered graph-id pair. Memoization is off by default so that reported
// matching counts mirror algorithmic work; it only applies when both graphs
// carry a non-empty id (transient graphs such as running means stay
// uncached). Thread safe: the counter is atomic and the cache is locked.
class DistanceOracle {
  public:
    explicit DistanceOracle(MatcherKind kind = MatcherKind::exact, GaParams ga = {},
                            bool memoize = false, BnbOptions bnb = {});

    Alignment distance(const AttributedGraph& x, const AttributedGraph& y);

    MatcherKind kind() const { return kind_; }
    bool exact() const { return kind_ == MatcherKind::exact; }
    std::uint64_t calls() const { return calls_.load(); }
    std::uint64_t memo_hits() const { return memo_hits_.load(); }
    void reset_counters();

  private:
    MatcherKind kind_;
    GaParams ga_;
    BnbOptions bnb_;
    bool memoize_;
    std::atomic<std::uint64_t> calls_{0};
    std::atomic<std::uint64_t> memo_hits_{0};
    std::mutex memo_mutex_;
    std::map<std::pair<std::string, std::string>, Alignment> memo_;
};

// Symmetric matrix of pairwise centroid distances, zero diagonal,
// k*(k-1)/2 oracle calls.
std::vector<std::vector<double>> inter_centroid_distances(
    const std::vector<AttributedGraph>& centroids, DistanceOracle& oracle);

}  // namespace graphkm

#endif
