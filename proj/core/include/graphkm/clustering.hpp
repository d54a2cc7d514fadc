#ifndef GRAPHKM_CLUSTERING_HPP
#define GRAPHKM_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "graphkm/graph.hpp"
#include "graphkm/matcher.hpp"

namespace graphkm {

// Hard membership of N patterns in k clusters, stored as the assigned column
// per row; every row therefore sums to exactly one in the dense view.
struct MembershipMatrix {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // size N, values in [0, k)

    std::size_t n() const { return assignment.size(); }
    std::vector<std::vector<int>> dense() const;
    std::vector<std::size_t> cluster_sizes() const;
    bool operator==(const MembershipMatrix&) const = default;
};

enum class EmptyClusterPolicy { repair_farthest, drop };
enum class Algorithm { std_kmeans, elkan };

struct ClusterConfig {
    std::size_t k = 2;
    std::size_t max_iters = 100;
    std::size_t no_improve_limit = 3;  // consecutive non-improving iterations
    std::uint64_t seed = 0;
    EmptyClusterPolicy empty_policy = EmptyClusterPolicy::repair_farthest;
    bool verification = false;          // exact matcher only; audits every bound use
    bool record_membership_trace = false;
    int threads = 1;

    void validate(std::size_t sample_size) const;  // throws ConfigError
};

// Triangle-inequality bookkeeping: one lower bound per (pattern, centroid),
// one upper bound per pattern on the distance to its assigned centroid, and
// a staleness flag that marks upper bounds inflated by centroid movement.
struct BoundsTable {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> lower;            // n x k, row major
    std::vector<double> upper;            // n
    std::vector<char> upper_stale;        // n
    std::vector<std::size_t> assignment;  // n

    BoundsTable() = default;
    BoundsTable(std::size_t n_, std::size_t k_);
    double& l(std::size_t i, std::size_t j) { return lower[i * k + j]; }
    double l(std::size_t i, std::size_t j) const { return lower[i * k + j]; }
    void drop_column(std::size_t j);
};

// Outcome of auditing bound uses and pruning decisions against freshly
// recomputed exact distances (verification mode only).
struct VerificationReport {
    std::uint64_t bound_checks = 0;
    std::uint64_t bound_violations = 0;
    std::uint64_t prune_checks = 0;
    std::uint64_t prune_violations = 0;
};

// Matching counts per iteration, split by phase. For the standard algorithm
// only `assignment` and `mean_recompute` are populated.
struct IterationCounters {
    std::uint64_t inter_centroid = 0;
    std::uint64_t assignment = 0;
    std::uint64_t mean_recompute = 0;
    std::uint64_t delta = 0;

    std::uint64_t total() const {
        return inter_centroid + assignment + mean_recompute + delta;
    }
};

struct ClusteringResult {
    Algorithm algorithm = Algorithm::std_kmeans;
    std::vector<AttributedGraph> centroids;
    MembershipMatrix membership;

    // Objective values per iteration, measured after the assignment step.
    // For the standard algorithm these are exact values of the cluster
    // objective J = sum of squared assigned distances. The accelerated
    // algorithm cannot know skipped distances without paying for them, so
    // its trace is the upper-bound objective (sum of squared upper bounds);
    // it coincides with J whenever no bound is stale. Recompute the exact
    // final objective through the evaluation module when comparing runs.
    std::vector<double> objective_trace;

    std::size_t iterations = 0;
    double best_objective = 0.0;
    std::size_t best_iteration = 0;  // 1-based

    std::uint64_t init_matchings = 0;
    std::vector<IterationCounters> per_iteration;
    std::uint64_t total_matchings = 0;

    std::uint64_t seed = 0;
    std::size_t repairs = 0;
    VerificationReport verification;
    std::vector<MembershipMatrix> membership_trace;  // when recorded
};

// Furthest-first initialization: the first centroid is the sample member
// closest to an incremental mean of the whole sample, each further one the
// member maximizing the distance to its nearest chosen centroid. Ties go to
// the lowest index; the k members are distinct by index.
std::vector<AttributedGraph> init_furthest_first(const std::vector<AttributedGraph>& sample,
                                                 std::size_t k, DistanceOracle& oracle,
                                                 std::uint64_t seed);

// Re-populates empty clusters according to `policy`. With repair_farthest the
// empty centroid is replaced by a copy of the pattern farthest from its own
// centroid judged by `assigned_distance` (exact distances for the standard
// algorithm, upper bounds for the accelerated one; ties to the lowest index,
// no extra matchings), and that pattern moves into the repaired cluster. With
// drop the centroid is removed and k shrinks. `bounds`, when given, is kept
// consistent (lower bounds of a repaired column reset to zero).
struct RepairEvent {
    std::size_t cluster = 0;
    std::size_t pattern = 0;
};
std::vector<RepairEvent> handle_empty_clusters(std::vector<AttributedGraph>& centroids,
                                               MembershipMatrix& membership,
                                               std::vector<double>& assigned_distance,
                                               const std::vector<AttributedGraph>& sample,
                                               EmptyClusterPolicy policy, BoundsTable* bounds);

// Standard k-means over the graph metric: full N x k assignment scan each
// iteration, centroids recomputed by the incremental mean. Memberships start
// from the same seeded random split as kmeans_elkan and a pattern only moves
// on a strict improvement, so the two variants agree even through exact
// distance ties. Stops after no_improve_limit consecutive iterations without
// objective improvement or at max_iters, and returns the best-objective
// state seen.
ClusteringResult kmeans_std(const std::vector<AttributedGraph>& sample,
                            const ClusterConfig& config, DistanceOracle& oracle);

// Triangle-inequality accelerated k-means. Skips a centroid when the upper
// bound alone proves it cannot win, refreshing bounds lazily; per iteration
// it pays k(k-1)/2 inter-centroid distances, k centroid displacements, the
// mean recomputation, and only the delayed evaluations the bounds could not
// avoid. With the exact matcher it visits the same membership sequence as
// kmeans_std under the same seed. Termination mirrors kmeans_std but runs on
// the upper-bound objective; the returned state is the final iterate.
ClusteringResult kmeans_elkan(const std::vector<AttributedGraph>& sample,
                              const ClusterConfig& config, DistanceOracle& oracle);

}  // namespace graphkm

#endif
