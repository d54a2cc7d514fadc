#ifndef GRAPHKM_MEAN_HPP
#define GRAPHKM_MEAN_HPP

#include <cstdint>
#include <vector>

#include "graphkm/graph.hpp"
#include "graphkm/matcher.hpp"

namespace graphkm {

// Sum of squared distances F(candidate) = 1/2 * sum_i D(candidate, X_i)^2.
// Exactly sample.size() oracle calls. Throws EmptySampleError on an empty
// sample.
double ssd(const AttributedGraph& candidate, const std::vector<AttributedGraph>& sample,
           DistanceOracle& oracle);

struct SampleMeanResult {
    AttributedGraph mean;
    double ssd = 0.0;                            // NaN when not requested
    std::uint64_t alignments_used = 0;           // N - 1 for the pass itself
    std::vector<std::size_t> presentation_order; // shuffled sample indices
    std::uint64_t seed = 0;
};

// Incremental arithmetic mean: shuffles the sample by seed, then folds each
// graph into the running estimate through an optimal alignment,
//   y_1 = x_1,   y_i = ((i-1)/i) * y_{i-1} + (1/i) * x_i.
// One pass, exactly N - 1 oracle calls; the result approximates a sample
// mean (never guaranteed to reach the optimum). All graphs are padded to the
// maximum order in the sample and the returned mean has trailing all-zero
// vertices trimmed. When compute_ssd is set, F(mean) is evaluated afterwards
// at N further oracle calls; otherwise the ssd field is NaN.
SampleMeanResult iam_mean(const std::vector<AttributedGraph>& sample, std::uint64_t seed,
                          DistanceOracle& oracle, bool compute_ssd = true);

// Restricted sample mean: the sample member minimizing F, ties resolved to
// the lowest index. Uses N*(N-1)/2 oracle calls (distance symmetry reused).
AttributedGraph set_mean(const std::vector<AttributedGraph>& sample, DistanceOracle& oracle);

// A jointly aligned tuple of representations, one per sample graph, all at a
// common padded order.
using MultipleAlignment = std::vector<Representation>;

struct BruteForceMeanResult {
    AttributedGraph mean;
    MultipleAlignment alignment;  // the winning combination
    double ssd = 0.0;             // F at the mean, the global minimum
    double sps = 0.0;             // sum of pairwise inner products of the winner
};

// Global sample mean by exhaustive enumeration: fixes the first graph's
// representation and tries every permutation of the others; each
// combination's arithmetic mean is scored by its raw half sum of squared
// distances, whose minimum over all combinations equals min F. Intended as a
// test oracle; guarded to sample size <= 5 and padded order <= 4
// (ScaleGuardError beyond).
BruteForceMeanResult brute_force_mean(const std::vector<AttributedGraph>& sample);

}  // namespace graphkm

#endif
