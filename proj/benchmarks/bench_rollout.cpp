#include "passive_rl/instances.hpp"
#include "passive_rl/rollout.hpp"

#include <benchmark/benchmark.h>

using namespace passive_rl;

static void BM_TabularRollout(benchmark::State& state) {
    const auto mdp = instances::benchmark_3x2();
    const auto policy = Policy::uniform(3, 2);
    const int episodes = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rollout(mdp, policy, episodes, 60, ++seed, 1));
    state.SetItemsProcessed(state.iterations() * episodes * 61);
}
BENCHMARK(BM_TabularRollout)->Arg(100)->Arg(10000);

static void BM_ContinuousRollout(benchmark::State& state) {
    const auto mdp = instances::random_walk_mdp();
    const BinnedPolicy policy{StateGrid(mdp.lower, mdp.upper, 10), Policy::uniform(10, mdp.n_actions)};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rollout(mdp, policy, 100, 60, ++seed, 1));
    state.SetItemsProcessed(state.iterations() * 100 * 61);
}
BENCHMARK(BM_ContinuousRollout);

BENCHMARK_MAIN();
