#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <graphkm/matcher.hpp>

#include "bench_common.hpp"

using namespace graphkm;

namespace {

std::vector<std::pair<AttributedGraph, AttributedGraph>> pair_pool(std::size_t order,
                                                                   std::size_t count) {
    std::mt19937_64 rng(7100 + order);
    std::vector<std::pair<AttributedGraph, AttributedGraph>> pool;
    for (std::size_t i = 0; i < count; ++i)
        pool.emplace_back(benchsupport::random_graph(rng, order, 2, 2, 0.5),
                          benchsupport::random_graph(rng, order, 2, 2, 0.5));
    return pool;
}

void BM_DistanceExact(benchmark::State& state) {
    const auto pool = pair_pool(static_cast<std::size_t>(state.range(0)), 32);
    DistanceOracle oracle(MatcherKind::exact);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [x, y] = pool[i++ % pool.size()];
        benchmark::DoNotOptimize(oracle.distance(x, y).distance);
    }
    state.counters["matchings"] =
        benchmark::Counter(static_cast<double>(oracle.calls()), benchmark::Counter::kIsRate);
}

void BM_DistanceGa(benchmark::State& state) {
    const auto pool = pair_pool(static_cast<std::size_t>(state.range(0)), 32);
    DistanceOracle oracle(MatcherKind::graduated_assignment);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [x, y] = pool[i++ % pool.size()];
        benchmark::DoNotOptimize(oracle.distance(x, y).distance);
    }
    state.counters["matchings"] =
        benchmark::Counter(static_cast<double>(oracle.calls()), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_DistanceExact)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DistanceGa)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
