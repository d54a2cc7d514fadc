#ifndef GRAPHKM_EVALUATION_HPP
#define GRAPHKM_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphkm/clustering.hpp"
#include "graphkm/graph.hpp"
#include "graphkm/matcher.hpp"

namespace graphkm {

struct SilhouetteResult {
    double index = 0.0;                     // mean of the cluster silhouettes
    std::vector<double> per_cluster;        // S_j
    std::vector<double> per_pattern;        // s_i
};

// Pairwise distance matrix over the sample: N(N-1)/2 oracle calls,
// symmetric, zero diagonal.
std::vector<std::vector<double>> pairwise_distances(const std::vector<AttributedGraph>& sample,
                                                    DistanceOracle& oracle, int threads = 1);

// Silhouette validation index on a hard partition. a_i averages the
// distances within the own cluster (self excluded), b_i is the smallest
// average distance to another cluster, s_i = (b_i - a_i) / max(a_i, b_i).
// Singletons score 0, as does a 0/0 quotient. Requires k >= 2 and no empty
// cluster (ConfigError otherwise).
SilhouetteResult silhouette_index(const std::vector<std::vector<double>>& dist,
                                  const MembershipMatrix& membership);

// Cluster objective J = sum_i D(X_i, Y_{assignment(i)})^2, evaluated fresh
// (N oracle calls).
double cluster_error(const std::vector<AttributedGraph>& sample,
                     const std::vector<AttributedGraph>& centroids,
                     const MembershipMatrix& membership, DistanceOracle& oracle,
                     int threads = 1);

// Same objective from already-known assigned distances; no matchings.
double cluster_error(const std::vector<double>& assigned_distances);

enum class LabelMapping { majority, optimal };

// Fraction of patterns whose cluster's label matches their own. majority
// maps every cluster to its most frequent label (ties to the
// lexicographically smallest label; clusters may share a label). optimal
// maps clusters to distinct labels maximizing the total match count.
// Throws LabelsRequiredError if any pattern lacks a label.
double classification_accuracy(const std::vector<AttributedGraph>& sample,
                               const MembershipMatrix& membership,
                               LabelMapping mapping = LabelMapping::majority);

// Distance between two nonempty graph sets: the smallest pairwise distance.
double set_distance(const std::vector<AttributedGraph>& a,
                    const std::vector<AttributedGraph>& b, DistanceOracle& oracle);

struct EvalReport {
    double error = 0.0;
    std::optional<double> accuracy;
    std::optional<double> silhouette;
    std::vector<double> per_cluster_silhouette;
    std::uint64_t clustering_matchings = 0;
    double matchings_per_iteration = 0.0;
    std::uint64_t eval_matchings = 0;
    std::optional<double> speedup_total;          // baseline matchings / own
    std::optional<double> speedup_per_iteration;
};

}  // namespace graphkm

#endif
