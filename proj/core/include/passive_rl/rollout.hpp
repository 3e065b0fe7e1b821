#pragma once

#include "passive_rl/mdp.hpp"

#include <cstdint>
#include <vector>

namespace passive_rl {

/// n episodes of steps h = 0..H. Episode i is driven by derive_seed(seed, i), so the
/// batch is a pure function of its arguments regardless of `threads`.
std::vector<Episode> rollout(const TabularMdp& mdp, const Policy& policy, int n, int horizon,
                             std::uint64_t seed, int threads = 0);

/// Continuous-state counterpart. Throws ValidationError when the sampler leaves the
/// state box or the reward function leaves [0, 1].
std::vector<ContinuousEpisode> rollout(const ContinuousMdp& mdp, const BinnedPolicy& policy, int n,
                                       int horizon, std::uint64_t seed, int threads = 0);

/// Sum over steps of gamma^h * r_h.
template <class State>
double discounted_return(const BasicEpisode<State>& episode, double gamma) {
    double total = 0.0;
    double weight = 1.0;
    for (const auto& step : episode.steps) {
        total += weight * step.reward;
        weight *= gamma;
    }
    return total;
}

/// Smallest H with gamma^(H+1) / (1 - gamma) <= tolerance.
int horizon_for_tolerance(double gamma, double tolerance);

} // namespace passive_rl
