#include "passive_rl/discretize.hpp"
#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"
#include "passive_rl/instances.hpp"
#include "passive_rl/quadrature.hpp"
#include "passive_rl/rollout.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace passive_rl;

namespace {

double irwin_hall(double x, int k) {
    if (x <= 0.0 || x >= k) return 0.0;
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k && j < x; ++j) {
        sum += (j % 2 ? -1.0 : 1.0) * binom * std::pow(x - j, k - 1);
        binom = binom * (k - j) / (j + 1);
    }
    return sum / std::tgamma(k);
}

} // namespace

TEST(Instances, Benchmark2x2OptimalPolicySwitchesThenStays) {
    const auto opt = optimal_policy(instances::benchmark_2x2());
    EXPECT_EQ(opt.policy.argmax(0), 1);
    EXPECT_EQ(opt.policy.argmax(1), 0);
}

TEST(Instances, Benchmark3x2HasNonMyopicOptimum) {
    const auto mdp = instances::benchmark_3x2();
    const auto opt = optimal_policy(mdp);
    // the myopic choice in s0 is a0 (0.4 > 0.1); the optimum heads for s2
    EXPECT_GT(mdp.mean_reward(0, 0), mdp.mean_reward(0, 1));
    EXPECT_EQ(opt.policy.argmax(0), 1);
    EXPECT_EQ(opt.policy.argmax(2), 1);
    EXPECT_GT(opt.value - exact_value(mdp, Policy::uniform(3, 2)), 0.5);
}

TEST(Instances, RandomMdpRespectsOptions) {
    Rng rng(1);
    for (int k = 0; k < 50; ++k) {
        const auto mdp = instances::random_tabular_mdp(3, 4, rng, {.gamma_min = 0.6, .gamma_max = 0.7});
        EXPECT_GE(mdp.gamma(), 0.6);
        EXPECT_LE(mdp.gamma(), 0.7);
        for (const auto& r : mdp.rewards()) EXPECT_EQ(r.kind, RewardLaw::Kind::bernoulli);
    }
    const auto det = instances::random_tabular_mdp(2, 2, rng, {.bernoulli_rewards = false});
    for (const auto& r : det.rewards()) EXPECT_EQ(r.kind, RewardLaw::Kind::deterministic);
}

TEST(Instances, RandomSimplexPointIsPositiveDistribution) {
    Rng rng(2);
    const auto p = instances::random_simplex_point(7, rng);
    double sum = 0.0;
    for (double x : p) {
        EXPECT_GT(x, 0.0);
        sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Instances, BumpDensityIntegratesToOne) {
    for (double w : {0.2, 0.6, 0.9}) {
        const auto q = simpson_adaptive([w](double x) { return instances::bump_density(x, w); }, 0.0, 1.0, 1e-10);
        EXPECT_NEAR(q.value, 1.0, 1e-8);
    }
}

TEST(Instances, BumpHolderConstantIsSupOfSecondDerivative) {
    const double w = 0.6;
    const auto mdp = instances::iid_bump_mdp(w, 2);
    double peak = 0.0;
    const double h = 1e-4;
    for (double x = 0.5 - w / 2 + h; x < 0.5 + w / 2 - h; x += 1e-3) {
        const double f2 = (instances::bump_density(x + h, w) - 2 * instances::bump_density(x, w) +
                           instances::bump_density(x - h, w)) /
                          (h * h);
        peak = std::max(peak, std::abs(f2) / 2.0);
    }
    EXPECT_LE(peak, mdp.holder_const * (1 + 1e-6));
    EXPECT_GE(peak, 0.99 * mdp.holder_const);
}

TEST(Instances, BumpSamplerMatchesDensity) {
    const auto mdp = instances::iid_bump_mdp(0.6, 2);
    Rng rng(3);
    const int n = 200000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < n; ++i) {
        const auto x = mdp.mu0_sampler(rng);
        counts[std::min(9, static_cast<int>(x[0] * 10))]++;
    }
    for (int b = 0; b < 10; ++b) {
        const double p = simpson([](double x) { return instances::bump_density(x, 0.6); }, b / 10.0, (b + 1) / 10.0,
                                 10);
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
        EXPECT_NEAR(counts[b] / static_cast<double>(n), p, 4 * se + 1e-9) << "bin " << b;
    }
}

TEST(Instances, RandomWalkHolderConstantCoversPropagatedOccupancy) {
    // Occupancy of the uniform policy by iterating rho = (1-g) mu0 + g int rho(s) p(.|s) ds
    // on a trapezoid grid, then the sup of |rho''| / 2 per action.
    const auto mdp = instances::random_walk_mdp();
    const int n = 1201;
    const double h = 1.0 / (n - 1);
    std::vector<double> x(n), w(n, h), mu0(n);
    w.front() = w.back() = h / 2;
    for (int i = 0; i < n; ++i) {
        x[i] = i * h;
        mu0[i] = irwin_hall((x[i] - 0.5) / 0.05 + 3.0, 6) / 0.05;
    }
    std::vector<double> kernel(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::vector<double> s{x[i]}, t{x[j]};
            kernel[static_cast<std::size_t>(i) * n + j] =
                0.5 * ((*mdp.transition_density)(s, 0, t) + (*mdp.transition_density)(s, 1, t));
        }
    std::vector<double> rho = mu0;
    for (int it = 0; it < 300; ++it) {
        std::vector<double> next(n);
        for (int j = 0; j < n; ++j) next[j] = (1 - mdp.gamma) * mu0[j];
        for (int i = 0; i < n; ++i) {
            const double mass = mdp.gamma * rho[i] * w[i];
            if (mass == 0.0) continue;
            const double* row = kernel.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) next[j] += mass * row[j];
        }
        rho = std::move(next);
    }
    double total = 0.0, peak = 0.0;
    for (int i = 0; i < n; ++i) total += w[i] * rho[i];
    for (int i = 1; i + 1 < n; ++i) peak = std::max(peak, std::abs(rho[i + 1] - 2 * rho[i] + rho[i - 1]) / (h * h));
    EXPECT_NEAR(total, 1.0, 1e-9);
    const double per_action = peak / 2.0;
    EXPECT_LE(per_action, mdp.holder_const);
    EXPECT_GE(per_action, 0.95 * mdp.holder_const);
}

TEST(Instances, RandomWalkDensityIntegratesToOne) {
    const auto mdp = instances::random_walk_mdp();
    for (double s : {0.0, 0.3, 1.0})
        for (int a = 0; a < 2; ++a) {
            const std::vector<double> state{s};
            const auto q = simpson_adaptive(
                [&](double y) {
                    const std::vector<double> next{y};
                    return (*mdp.transition_density)(state, a, next);
                },
                0.0, 1.0, 1e-10);
            EXPECT_NEAR(q.value, 1.0, 1e-8);
        }
}

TEST(Discretize, RowsAreDistributionsAndSeedDetermined) {
    const auto mdp = instances::random_walk_mdp();
    const StateGrid grid(mdp.lower, mdp.upper, 8);
    const auto a = discretize(mdp, grid, 32, 5);
    const auto b = discretize(mdp, grid, 32, 5);
    ASSERT_EQ(a.n_states(), 8);
    ASSERT_EQ(a.n_actions(), 2);
    EXPECT_DOUBLE_EQ(a.gamma(), mdp.gamma);
    for (std::size_t i = 0; i < a.transitions().size(); ++i) EXPECT_EQ(a.transitions()[i], b.transitions()[i]);
    for (int s = 0; s < 8; ++s)
        for (int act = 0; act < 2; ++act) {
            EXPECT_EQ(a.mean_reward(s, act), b.mean_reward(s, act));
            // reward = state; the mean over draws inside the cell sits inside it
            EXPECT_GE(a.mean_reward(s, act), s / 8.0);
            EXPECT_LE(a.mean_reward(s, act), (s + 1) / 8.0);
        }
}

TEST(Discretize, IidBumpRowsApproachCellMasses) {
    const auto mdp = instances::iid_bump_mdp(0.6, 2);
    const StateGrid grid(mdp.lower, mdp.upper, 5);
    const auto tab = discretize(mdp, grid, 4000, 9);
    for (int t = 0; t < 5; ++t) {
        const double p =
            simpson([](double y) { return instances::bump_density(y, 0.6); }, t / 5.0, (t + 1) / 5.0, 10);
        for (int s = 0; s < 5; ++s) EXPECT_NEAR(tab.transition(s, 0, t), p, 0.03);
        EXPECT_NEAR(tab.mu0()[t], p, 0.01);
    }
}

TEST(EstimateValue, ConstantRewardIsExact) {
    const auto mdp = instances::iid_bump_mdp(0.6, 2);
    const BinnedPolicy policy{StateGrid(mdp.lower, mdp.upper, 1), Policy::uniform(1, 2)};
    const auto est = estimate_value(mdp, policy, 100, 20, 1);
    EXPECT_NEAR(est.mean, 0.5 * (1 - std::pow(0.9, 21)) / 0.1, 1e-12);
    EXPECT_NEAR(est.half_width, 0.0, 1e-12);
    EXPECT_EQ(est.episodes, 100);
}

TEST(EstimateValue, HalfWidthShrinksWithEpisodes) {
    const auto mdp = instances::random_walk_mdp();
    const BinnedPolicy policy{StateGrid(mdp.lower, mdp.upper, 1), Policy::uniform(1, 2)};
    const auto small = estimate_value(mdp, policy, 400, 40, 2);
    const auto large = estimate_value(mdp, policy, 6400, 40, 2);
    EXPECT_LT(large.half_width, 0.5 * small.half_width);
    EXPECT_NEAR(small.mean, large.mean, 3 * small.half_width);
}
