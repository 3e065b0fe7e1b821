#pragma once

#include "passive_rl/density.hpp"
#include "passive_rl/dual_solver.hpp"
#include "passive_rl/mdp.hpp"
#include "passive_rl/occupancy.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace passive_rl {

enum class Estimator { plugin, kde };

struct Transition {
    int state;
    int action;
    double reward;
    int next_state;
};

/// Pre-collected data and the reference occupancy d^D it induces.
struct PassiveMemory {
    std::vector<Transition> transitions;
    /// Estimate before smoothing.
    OccupancyTable raw_dist;
    /// Estimate mixed with uniform at `smoothing_floor`; what the learner uses.
    OccupancyTable ref_dist;
    /// Continuous memories keep the kernel estimate that produced ref_dist.
    std::optional<KdeModel> kde;
    double smoothing_floor = 0.0;
    /// raw_dist is strictly positive on every cell.
    bool coverage_ok = false;
};

PassiveMemory build_memory(std::span<const Episode> episodes, int n_states, int n_actions, double gamma,
                           Estimator estimator, double smoothing_floor);

/// Memory equal to a given table (for example uniform, or an exact occupancy).
PassiveMemory memory_from_table(const OccupancyTable& table, double smoothing_floor);

/// True when the unsmoothed memory is positive on the support of d_star.
bool memory_covers(const PassiveMemory& memory, const OccupancyTable& d_star);

/// Projects a kernel estimate onto grid cells: cell-centre density times cell volume,
/// renormalized.
OccupancyTable kde_to_table(const KdeModel& model, const StateGrid& grid);

/// Continuous memory: kernel estimate over the state box projected on `grid`.
PassiveMemory build_memory(std::span<const ContinuousEpisode> episodes, const ContinuousMdp& mdp,
                           const StateGrid& grid, const KernelSpec& kernel, double smoothing_floor);

struct OnlineConfig {
    int rounds = 50;
    int episodes_per_round = 100;
    /// Negative selects the smallest H with gamma^(H+1)/(1-gamma) <= 1e-3.
    int horizon = -1;
    /// Empty selects auto_eta.
    std::optional<double> eta;
    Estimator estimator = Estimator::plugin;
    double delta = 0.05;
    std::uint64_t seed = 1;
    double smoothing_floor = 1e-6;
    SolverOptions solver{.tol = 1e-9, .max_iters = 10'000, .method = DescentMethod::newton};
    /// Kernel for continuous runs (bandwidth and L included).
    std::optional<KernelSpec> kernel;
    /// Grid used to tabulate continuous runs.
    int cells_per_dim = 10;
    int samples_per_cell = 64;
    /// Rollouts used to score each continuous policy.
    int eval_episodes = 10'000;
};

int resolve_horizon(const OnlineConfig& config, double gamma);

struct RegretRecord {
    std::vector<double> per_round_gap;
    std::vector<double> cumulative;
    std::vector<Policy> policies;
    std::vector<double> eta;
    std::vector<int> solver_iters;
    std::vector<double> estimator_error_bound;
    /// Continuous runs: 95% half-width of each gap estimate; empty for tabular runs.
    std::vector<double> gap_half_width;
    /// Value the gaps are measured against.
    double optimal_value = 0.0;

    double total() const noexcept { return cumulative.empty() ? 0.0 : cumulative.back(); }
    /// CSV `round,gap,cumulative,eta,solver_iters,estimator_error_bound`.
    void save_csv(const std::filesystem::path& path) const;
};

/// sqrt(D(d*||d^D) / (T S A (eps + gamma^(H+1)/(1-gamma)))) with eps =
/// plugin_error_bound(n, S A, delta), floored at 1e-6. Without d_star the divergence
/// is replaced by log(S A).
double auto_eta(const TabularMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config,
                const std::optional<OccupancyTable>& d_star);

/// sqrt(kl S A (eps + gamma^H/(1-gamma)) n T), implied constant 1.
double regret_upper_bound(double kl, int cells, double epsilon, double gamma, int horizon, long long n,
                          long long rounds);

/// Mirror-descent loop seeded by memory.ref_dist, scored exactly each round. Throws
/// NumericalError naming the round when a dual solve does not converge.
RegretRecord run_online(const TabularMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config);

/// Continuous counterpart on the grid model produced by discretize. Each policy is
/// scored by eval_episodes rollouts against the grid-optimal policy (also scored by
/// rollouts with the same seed stream).
RegretRecord run_online_continuous(const ContinuousMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config);

} // namespace passive_rl
