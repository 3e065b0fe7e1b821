#include "passive_rl/rollout.hpp"

#include "passive_rl/errors.hpp"
#include "passive_rl/parallel.hpp"

#include <cmath>

namespace passive_rl {

namespace {

void check_rollout_args(int n, int horizon) {
    if (n < 1) throw ValidationError("episode count must be at least 1");
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
}

} // namespace

std::vector<Episode> rollout(const TabularMdp& mdp, const Policy& policy, int n, int horizon,
                             std::uint64_t seed, int threads) {
    check_rollout_args(n, horizon);
    if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions())
        throw ValidationError("policy shape does not match the MDP");

    std::vector<Episode> episodes(n);
    parallel_for(
        episodes.size(),
        [&](std::size_t i) {
            Episode& ep = episodes[i];
            ep.horizon = horizon;
            ep.seed = derive_seed(seed, i);
            Rng rng(ep.seed);
            ep.steps.reserve(horizon + 1);
            int s = sample_categorical(mdp.mu0(), rng);
            for (int h = 0; h <= horizon; ++h) {
                const int a = sample_categorical(policy.row(s), rng);
                const double r = mdp.reward(s, a).sample(rng);
                const int next = sample_categorical(mdp.transition_row(s, a), rng);
                ep.steps.push_back({s, a, r, next});
                s = next;
            }
        },
        threads);
    return episodes;
}

std::vector<ContinuousEpisode> rollout(const ContinuousMdp& mdp, const BinnedPolicy& policy, int n,
                                       int horizon, std::uint64_t seed, int threads) {
    check_rollout_args(n, horizon);
    mdp.validate();
    if (policy.table.n_actions() != mdp.n_actions) throw ValidationError("policy action count does not match the MDP");
    const StateGrid box(mdp.lower, mdp.upper, 1);

    std::vector<ContinuousEpisode> episodes(n);
    parallel_for(
        episodes.size(),
        [&](std::size_t i) {
            ContinuousEpisode& ep = episodes[i];
            ep.horizon = horizon;
            ep.seed = derive_seed(seed, i);
            Rng rng(ep.seed);
            ep.steps.reserve(horizon + 1);
            auto s = mdp.mu0_sampler(rng);
            if (!box.contains(s)) throw ValidationError("initial state outside the state box");
            for (int h = 0; h <= horizon; ++h) {
                const int a = sample_categorical(policy.action_probs(s), rng);
                const double r = mdp.reward_fn(s, a);
                if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("reward outside [0,1]");
                auto next = mdp.transition_sampler(s, a, rng);
                if (!box.contains(next)) throw ValidationError("sampled next state outside the state box");
                ep.steps.push_back({s, a, r, next});
                s = std::move(next);
            }
        },
        threads);
    return episodes;
}

int horizon_for_tolerance(double gamma, double tolerance) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    int h = 0;
    while (std::pow(gamma, h + 1) / (1.0 - gamma) > tolerance) ++h;
    return h;
}

} // namespace passive_rl
