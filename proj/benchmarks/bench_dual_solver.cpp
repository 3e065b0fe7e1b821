#include "passive_rl/dual_solver.hpp"
#include "passive_rl/instances.hpp"

#include <benchmark/benchmark.h>

using namespace passive_rl;

namespace {

void BM_SolveDual(benchmark::State& state, DescentMethod method) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(11);
    const auto mdp = instances::random_tabular_mdp(n, 4, rng);
    const auto ref = OccupancyTable::uniform(n, 4);
    const SolverOptions options{.tol = 1e-8, .method = method};
    for (auto _ : state) benchmark::DoNotOptimize(solve_dual(ref, mdp, 2.0, options));
    state.SetLabel(std::to_string(n) + " states x 4 actions");
}

void BM_DualGradient(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(12);
    const auto mdp = instances::random_tabular_mdp(n, 4, rng);
    const DualProblem problem(mdp, OccupancyTable::uniform(n, 4), 2.0);
    const DualPotential v{std::vector<double>(n, 0.1)};
    for (auto _ : state) benchmark::DoNotOptimize(problem.gradient(v));
}

} // namespace

BENCHMARK_CAPTURE(BM_SolveDual, newton, DescentMethod::newton)->Arg(5)->Arg(20)->Arg(50);
BENCHMARK_CAPTURE(BM_SolveDual, gradient, DescentMethod::gradient)->Arg(5)->Arg(20);
BENCHMARK(BM_DualGradient)->Arg(5)->Arg(50)->Arg(200);
