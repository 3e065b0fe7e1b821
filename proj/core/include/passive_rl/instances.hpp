#pragma once

#include "passive_rl/mdp.hpp"

namespace passive_rl::instances {

/// s0 -> s1 -> s0 with one action, gamma 0.5, start s0, R(s0)=1, R(s1)=0 (deterministic).
TabularMdp two_state_cycle();

/// 2 states x 2 actions, Bernoulli rewards, gamma 0.9. a0 tends to stay, a1 to switch;
/// the optimal policy switches out of s0 and stays in s1.
TabularMdp benchmark_2x2();

/// 3 states x 2 actions chain with Bernoulli rewards, gamma 0.9. Reaching and staying
/// in s2 pays; the myopic action in s0 does not.
TabularMdp benchmark_3x2();

/// Single state and action, deterministic reward r.
TabularMdp single_cell(double reward, double gamma);

struct RandomMdpOptions {
    double gamma_min = 0.5;
    double gamma_max = 0.9;
    bool bernoulli_rewards = true;
};

/// Dirichlet(1) transition rows and mu0, uniform reward parameters.
TabularMdp random_tabular_mdp(int n_states, int n_actions, Rng& rng, const RandomMdpOptions& options = {});

/// Strictly positive random distribution over n points (Dirichlet(1)).
std::vector<double> random_simplex_point(int n, Rng& rng);

/// Random stochastic policy with Dirichlet(1) rows.
Policy random_policy(int n_states, int n_actions, Rng& rng);

/// 1-D mean-reverting walk on [0,1] with two actions that nudge the drift down/up,
/// Irwin-Hall noise and reward equal to the state. Transition density is available.
ContinuousMdp random_walk_mdp(double gamma = 0.9);

/// Every state (initial or next) is an independent draw from the raised-cosine
/// density on [0.5 - w/2, 0.5 + w/2] inside [0,1], whatever the action. Under any
/// policy the occupancy in state space is that density, whose second derivative is
/// bounded by 4 pi^2 / w^3.
ContinuousMdp iid_bump_mdp(double width = 0.6, int n_actions = 2, double gamma = 0.9);

/// Raised-cosine density used by iid_bump_mdp.
double bump_density(double x, double width);

} // namespace passive_rl::instances
