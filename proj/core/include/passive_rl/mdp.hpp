#pragma once

#include "passive_rl/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace passive_rl {

/// Reward distribution of one state-action cell. Rewards live in [0, 1].
struct RewardLaw {
    enum class Kind { bernoulli, deterministic };

    Kind kind = Kind::deterministic;
    double param = 0.0;

    static RewardLaw bernoulli(double p) { return {Kind::bernoulli, p}; }
    static RewardLaw deterministic(double r) { return {Kind::deterministic, r}; }

    double mean() const noexcept { return param; }
    double sample(Rng& rng) const {
        if (kind == Kind::deterministic) return param;
        return uniform01(rng) < param ? 1.0 : 0.0;
    }
};

/// Finite discounted MDP. Immutable after construction; the constructor enforces
/// that transition rows and mu0 are distributions and that rewards lie in [0, 1].
class TabularMdp {
public:
    /// `transition` is laid out as [s][a][s'], `rewards` as [s][a].
    TabularMdp(int n_states, int n_actions, std::vector<double> transition,
               std::vector<RewardLaw> rewards, double gamma, std::vector<double> mu0);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    int n_cells() const noexcept { return n_states_ * n_actions_; }
    double gamma() const noexcept { return gamma_; }

    std::span<const double> mu0() const noexcept { return mu0_; }
    std::span<const double> transition_row(int s, int a) const noexcept {
        return {transition_.data() + cell(s, a) * n_states_, static_cast<std::size_t>(n_states_)};
    }
    double transition(int s, int a, int next) const noexcept {
        return transition_[cell(s, a) * n_states_ + next];
    }
    const RewardLaw& reward(int s, int a) const noexcept { return rewards_[cell(s, a)]; }
    double mean_reward(int s, int a) const noexcept { return rewards_[cell(s, a)].mean(); }

    std::span<const double> transitions() const noexcept { return transition_; }
    std::span<const RewardLaw> rewards() const noexcept { return rewards_; }

    std::size_t cell(int s, int a) const noexcept {
        return static_cast<std::size_t>(s) * n_actions_ + a;
    }

    /// Same dynamics and rewards, different initial distribution.
    TabularMdp with_initial(std::vector<double> mu0) const;
    /// Same dynamics, different reward table.
    TabularMdp with_rewards(std::vector<RewardLaw> rewards) const;

private:
    int n_states_;
    int n_actions_;
    std::vector<double> transition_;
    std::vector<RewardLaw> rewards_;
    double gamma_;
    std::vector<double> mu0_;
};

/// Stochastic state -> action table. Rows are distributions.
class Policy {
public:
    Policy(int n_states, int n_actions, std::vector<double> probs);

    static Policy uniform(int n_states, int n_actions);
    static Policy deterministic(std::span<const int> actions, int n_actions);
    /// alpha * first + (1 - alpha) * second, row by row.
    static Policy mixture(const Policy& first, const Policy& second, double alpha);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    double prob(int s, int a) const noexcept {
        return probs_[static_cast<std::size_t>(s) * n_actions_ + a];
    }
    std::span<const double> row(int s) const noexcept {
        return {probs_.data() + static_cast<std::size_t>(s) * n_actions_,
                static_cast<std::size_t>(n_actions_)};
    }
    std::span<const double> probs() const noexcept { return probs_; }

    /// Lowest-index action of maximal probability in state s.
    int argmax(int s) const noexcept;

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    int n_states_;
    int n_actions_;
    std::vector<double> probs_;
};

/// Axis-aligned box partitioned into a uniform grid of cells.
class StateGrid {
public:
    StateGrid(std::vector<double> lower, std::vector<double> upper, int cells_per_dim);

    int dim() const noexcept { return static_cast<int>(lower_.size()); }
    int cells_per_dim() const noexcept { return cells_per_dim_; }
    int n_cells() const noexcept { return n_cells_; }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    double cell_width(int axis) const noexcept {
        return (upper_[axis] - lower_[axis]) / cells_per_dim_;
    }
    double cell_volume() const noexcept;
    double volume() const noexcept;

    /// Cell containing x; points on or outside the boundary map to the nearest edge cell.
    int cell_of(std::span<const double> x) const noexcept;
    std::vector<double> cell_center(int cell) const;
    /// Uniform draw inside the given cell.
    std::vector<double> sample_in_cell(int cell, Rng& rng) const;
    bool contains(std::span<const double> x) const noexcept;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    int cells_per_dim_;
    int n_cells_;
};

/// Continuous-state, finite-action MDP on a compact box.
struct ContinuousMdp {
    using State = std::vector<double>;
    using TransitionSampler = std::function<State(std::span<const double>, int, Rng&)>;
    using TransitionDensity = std::function<double(std::span<const double>, int, std::span<const double>)>;
    using RewardFn = std::function<double(std::span<const double>, int)>;
    using InitialSampler = std::function<State(Rng&)>;

    std::vector<double> lower;
    std::vector<double> upper;
    int n_actions = 1;
    /// Measure of the action space; the cardinality for finite actions.
    double action_measure = 1.0;
    TransitionSampler transition_sampler;
    std::optional<TransitionDensity> transition_density;
    RewardFn reward_fn;
    double gamma = 0.9;
    InitialSampler mu0_sampler;
    /// Smoothness of the induced occupancy density: Hoelder order and constant.
    int holder_beta = 2;
    double holder_const = 1.0;

    int state_dim() const noexcept { return static_cast<int>(lower.size()); }
    double state_volume() const noexcept;
    /// Throws ValidationError when the fields are inconsistent.
    void validate() const;
};

/// A policy for a continuous-state MDP: bin the state on a grid, then act from
/// the per-bin action distribution.
struct BinnedPolicy {
    StateGrid grid;
    Policy table;

    std::span<const double> action_probs(std::span<const double> state) const {
        return table.row(grid.cell_of(state));
    }
};

template <class State>
struct BasicStep {
    State state;
    int action;
    double reward;
    State next_state;
};

/// One rollout, steps h = 0..H inclusive.
template <class State>
struct BasicEpisode {
    std::vector<BasicStep<State>> steps;
    int horizon = 0;
    std::uint64_t seed = 0;
};

using Step = BasicStep<int>;
using Episode = BasicEpisode<int>;
using ContinuousStep = BasicStep<std::vector<double>>;
using ContinuousEpisode = BasicEpisode<std::vector<double>>;

} // namespace passive_rl
