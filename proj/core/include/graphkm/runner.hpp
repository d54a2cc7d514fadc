#ifndef GRAPHKM_RUNNER_HPP
#define GRAPHKM_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphkm/clustering.hpp"
#include "graphkm/dataset_io.hpp"
#include "graphkm/evaluation.hpp"
#include "graphkm/manifest.hpp"
#include "graphkm/matcher.hpp"

namespace graphkm {

// One clustering job: R seeded repetitions of one algorithm, the best kept
// by the exactly re-evaluated objective. spec.config.seed is the base seed;
// repetition r runs with repetition_seed(base, r).
struct ExperimentSpec {
    ClusterConfig config;
    Algorithm algorithm = Algorithm::std_kmeans;
    std::size_t runs = 1;
    MatcherKind matcher = MatcherKind::exact;
    GaParams ga;
    BnbOptions bnb;
    bool memoize = false;
    bool with_silhouette = false;
    LabelMapping mapping = LabelMapping::majority;

    void validate() const;  // flag combinations only; sizes checked at run time
};

struct RunRecord {
    std::uint64_t seed = 0;
    ClusteringResult result;
    double error = 0.0;               // objective re-evaluated with fresh matchings
    std::uint64_t eval_matchings = 0;
};

struct Experiment {
    std::vector<RunRecord> runs;
    std::size_t best_run = 0;         // lowest error, ties to the lowest index
    EvalReport report;                // for the best run
};

// `pairwise` optionally supplies a precomputed distance matrix for the
// silhouette so repeated jobs on one sample share the N(N-1)/2 matchings.
Experiment run_experiment(const std::vector<AttributedGraph>& sample, const ExperimentSpec& spec,
                          const std::vector<std::vector<double>>* pairwise = nullptr);

Json cluster_manifest(const Dataset& dataset, const std::string& dataset_path,
                      const ExperimentSpec& spec, const Experiment& experiment);

// Recomputes an evaluation report from a saved cluster manifest: fresh
// assigned distances (same matcher settings as the recorded run), accuracy
// when the dataset is fully labeled, silhouette on demand, and the speedup
// ratios against an optional baseline manifest.
EvalReport evaluate_manifest(const Json& manifest, const Dataset& dataset, bool with_silhouette,
                             LabelMapping mapping, int threads, const Json* baseline);

struct BenchAlgoStats {
    double error = 0.0;
    std::optional<double> accuracy;
    std::optional<double> silhouette;
    double iterations = 0.0;
    double matchings_per_iteration = 0.0;
    double matchings_total = 0.0;
};

// Per-k comparison row, every stat averaged over the repetitions; the
// speedups are ratios of the averaged matching counts.
struct BenchRow {
    std::size_t k = 0;
    BenchAlgoStats std_stats;
    BenchAlgoStats elkan_stats;
    double speedup_total = 0.0;
    double speedup_per_iteration = 0.0;
};

// Runs both algorithms with matched seeds for every k in `ks`.
std::vector<BenchRow> run_bench(const std::vector<AttributedGraph>& sample,
                                const std::vector<std::size_t>& ks, const ExperimentSpec& base);

Json bench_manifest(const Dataset& dataset, const std::string& dataset_path,
                    const ExperimentSpec& base, const std::vector<std::size_t>& ks,
                    const std::vector<BenchRow>& rows);

std::string format_bench_table(const std::vector<BenchRow>& rows);

}  // namespace graphkm

#endif
