#include "passive_rl/adversarial.hpp"

#include <benchmark/benchmark.h>

using namespace passive_rl;

static void BM_EnumerateHistoryKl(benchmark::State& state) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 1});
    const auto policy = Policy::uniform(2, 2);
    const int horizon = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_history_kl(pair, policy, horizon));
}
BENCHMARK(BM_EnumerateHistoryKl)->DenseRange(1, 6);

static void BM_OccupancyWeightedKl(benchmark::State& state) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 1});
    const auto policy = Policy::uniform(2, 2);
    const int horizon = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(occupancy_weighted_kl(pair, policy, horizon));
}
BENCHMARK(BM_OccupancyWeightedKl)->Arg(6)->Arg(60);
