#include "passive_rl/discretize.hpp"

#include "passive_rl/errors.hpp"
#include "passive_rl/parallel.hpp"
#include "passive_rl/rollout.hpp"

#include <algorithm>
#include <cmath>

namespace passive_rl {

TabularMdp discretize(const ContinuousMdp& mdp, const StateGrid& grid, int samples_per_cell, std::uint64_t seed) {
    mdp.validate();
    if (samples_per_cell < 1) throw ValidationError("samples_per_cell must be at least 1");
    if (grid.dim() != mdp.state_dim()) throw ValidationError("grid dimension does not match the MDP");
    const int n = grid.n_cells();
    const int m = mdp.n_actions;
    std::vector<double> transition(static_cast<std::size_t>(n) * m * n, 0.0);
    std::vector<RewardLaw> rewards(static_cast<std::size_t>(n) * m);

    parallel_for(static_cast<std::size_t>(n) * m, [&](std::size_t cell) {
        const int s = static_cast<int>(cell / m);
        const int a = static_cast<int>(cell % m);
        Rng rng(derive_seed(seed, cell + 1));
        double reward = 0.0;
        double* row = transition.data() + cell * n;
        for (int k = 0; k < samples_per_cell; ++k) {
            const auto x = grid.sample_in_cell(s, rng);
            reward += mdp.reward_fn(x, a);
            const auto next = mdp.transition_sampler(x, a, rng);
            row[grid.cell_of(next)] += 1.0;
        }
        for (int t = 0; t < n; ++t) row[t] /= samples_per_cell;
        rewards[cell] = RewardLaw::deterministic(std::clamp(reward / samples_per_cell, 0.0, 1.0));
    });

    std::vector<double> mu0(n, 0.0);
    Rng rng(derive_seed(seed, 0));
    const long long draws = static_cast<long long>(samples_per_cell) * n;
    for (long long k = 0; k < draws; ++k) mu0[grid.cell_of(mdp.mu0_sampler(rng))] += 1.0;
    for (double& p : mu0) p /= static_cast<double>(draws);
    return {n, m, std::move(transition), std::move(rewards), mdp.gamma, std::move(mu0)};
}

ValueEstimate estimate_value(const ContinuousMdp& mdp, const BinnedPolicy& policy, int n, int horizon,
                             std::uint64_t seed) {
    const auto episodes = rollout(mdp, policy, n, horizon, seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& e : episodes) {
        const double g = discounted_return(e, mdp.gamma);
        sum += g;
        sum_sq += g * g;
    }
    ValueEstimate est;
    est.episodes = n;
    est.mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1)) : 0.0;
    est.half_width = 1.96 * std::sqrt(var / n);
    return est;
}

} // namespace passive_rl
