#include "passive_rl/density.hpp"
#include "passive_rl/instances.hpp"
#include "passive_rl/rollout.hpp"

#include <benchmark/benchmark.h>

using namespace passive_rl;

static void BM_PluginEstimate(benchmark::State& state) {
    const auto mdp = instances::benchmark_3x2();
    const auto episodes = rollout(mdp, Policy::uniform(3, 2), static_cast<int>(state.range(0)), 60, 5, 1);
    for (auto _ : state) benchmark::DoNotOptimize(plugin_estimate(episodes, 3, 2, mdp.gamma(), 60));
}
BENCHMARK(BM_PluginEstimate)->Arg(100)->Arg(10000);

static void BM_KdeGrid(benchmark::State& state) {
    const auto mdp = instances::iid_bump_mdp(0.6, 2, 0.9);
    const BinnedPolicy policy{StateGrid({0.0}, {1.0}, 1), Policy::uniform(1, 2)};
    const auto episodes = rollout(mdp, policy, static_cast<int>(state.range(0)), 60, 6, 1);
    const auto kernel = kernel_validate(named_kernel("epanechnikov"), 2, 1, 0.1, mdp.holder_const, "epanechnikov");
    const std::vector<double> lo{0.0}, hi{1.0};
    const auto model = kde_estimate(episodes, 2, kernel, mdp.gamma, 60, lo, hi);
    for (auto _ : state) benchmark::DoNotOptimize(model.grid_values(0, 201));
}
BENCHMARK(BM_KdeGrid)->Arg(100)->Arg(1000);

static void BM_KdePointEvaluation(benchmark::State& state) {
    const auto mdp = instances::iid_bump_mdp(0.6, 2, 0.9);
    const BinnedPolicy policy{StateGrid({0.0}, {1.0}, 1), Policy::uniform(1, 2)};
    const auto episodes = rollout(mdp, policy, 1000, 60, 7, 1);
    const auto kernel = kernel_validate(named_kernel("epanechnikov"), 2, 1, 0.1, mdp.holder_const, "epanechnikov");
    const std::vector<double> lo{0.0}, hi{1.0};
    const auto model = kde_estimate(episodes, 2, kernel, mdp.gamma, 60, lo, hi);
    const std::vector<double> x{0.43};
    for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(x, 1));
}
BENCHMARK(BM_KdePointEvaluation);
