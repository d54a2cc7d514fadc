#include <benchmark/benchmark.h>

#include <graphkm/clustering.hpp>

#include "bench_common.hpp"

using namespace graphkm;

namespace {

// 40 graphs in `k` separated blobs; the counter reports distance
// evaluations rather than wall time, which is the quantity the two
// algorithms actually trade in.
void run_kmeans(benchmark::State& state, Algorithm algo) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto sample = benchsupport::blob_sample(42, k, 40 / k, 3, 0.05);
    ClusterConfig cfg;
    cfg.k = k;
    cfg.seed = 7;
    std::uint64_t matchings = 0;
    std::uint64_t iterations = 0;
    for (auto _ : state) {
        DistanceOracle oracle(MatcherKind::exact);
        const ClusteringResult r = algo == Algorithm::elkan ? kmeans_elkan(sample, cfg, oracle)
                                                            : kmeans_std(sample, cfg, oracle);
        benchmark::DoNotOptimize(r.best_objective);
        matchings += r.total_matchings;
        iterations += r.iterations;
    }
    state.counters["matchings"] = benchmark::Counter(
        static_cast<double>(matchings) / static_cast<double>(state.iterations()));
    state.counters["kmeans_iters"] = benchmark::Counter(
        static_cast<double>(iterations) / static_cast<double>(state.iterations()));
}

void BM_KmeansStd(benchmark::State& state) { run_kmeans(state, Algorithm::std_kmeans); }
void BM_KmeansElkan(benchmark::State& state) { run_kmeans(state, Algorithm::elkan); }

}  // namespace

BENCHMARK(BM_KmeansStd)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KmeansElkan)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
