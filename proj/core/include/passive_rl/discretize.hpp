#pragma once

#include "passive_rl/mdp.hpp"

#include <cstdint>
#include <vector>

namespace passive_rl {

/// Tabular model of a continuous MDP on a uniform grid. Each (cell, action) row is the
/// empirical distribution of next-state cells over `samples_per_cell` uniform draws
/// inside the cell; the reward is the deterministic mean of reward_fn over the same
/// draws; mu0 is the histogram of samples_per_cell * n_cells initial draws.
TabularMdp discretize(const ContinuousMdp& mdp, const StateGrid& grid, int samples_per_cell, std::uint64_t seed);

/// Mean discounted return of `policy` over n truncated rollouts with a normal 95%
/// confidence half-width.
struct ValueEstimate {
    double mean = 0.0;
    double half_width = 0.0;
    int episodes = 0;
};

ValueEstimate estimate_value(const ContinuousMdp& mdp, const BinnedPolicy& policy, int n, int horizon,
                             std::uint64_t seed);

} // namespace passive_rl
