#include "passive_rl/instances.hpp"

#include "passive_rl/errors.hpp"

#include <cmath>
#include <numbers>

namespace passive_rl::instances {

using RL = RewardLaw;

TabularMdp two_state_cycle() {
    return {2, 1, {0.0, 1.0, 1.0, 0.0}, {RL::deterministic(1.0), RL::deterministic(0.0)}, 0.5, {1.0, 0.0}};
}

TabularMdp benchmark_2x2() {
    // clang-format off
    std::vector<double> t = {
        0.8, 0.2,   // s0 a0
        0.2, 0.8,   // s0 a1
        0.2, 0.8,   // s1 a0
        0.8, 0.2,   // s1 a1
    };
    // clang-format on
    return {2, 2, std::move(t),
            {RL::bernoulli(0.2), RL::bernoulli(0.5), RL::bernoulli(0.9), RL::bernoulli(0.1)}, 0.9, {0.5, 0.5}};
}

TabularMdp benchmark_3x2() {
    // clang-format off
    std::vector<double> t = {
        0.9, 0.1, 0.0,   // s0 a0
        0.2, 0.7, 0.1,   // s0 a1
        0.7, 0.2, 0.1,   // s1 a0
        0.1, 0.3, 0.6,   // s1 a1
        0.1, 0.6, 0.3,   // s2 a0
        0.0, 0.2, 0.8,   // s2 a1
    };
    // clang-format on
    return {3, 2, std::move(t),
            {RL::bernoulli(0.4), RL::bernoulli(0.1), RL::bernoulli(0.2), RL::bernoulli(0.1), RL::bernoulli(0.3),
             RL::bernoulli(0.9)},
            0.9, {0.6, 0.3, 0.1}};
}

TabularMdp single_cell(double reward, double gamma) {
    return {1, 1, {1.0}, {RL::deterministic(reward)}, gamma, {1.0}};
}

std::vector<double> random_simplex_point(int n, Rng& rng) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& x : p) {
        x = -std::log(1.0 - uniform01(rng)) + 1e-12;
        sum += x;
    }
    for (double& x : p) x /= sum;
    // fold the rounding residue into the largest entry so the row sums to 1 tightly
    double total = 0.0;
    std::size_t biggest = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total += p[i];
        if (p[i] > p[biggest]) biggest = i;
    }
    p[biggest] += 1.0 - total;
    return p;
}

TabularMdp random_tabular_mdp(int n_states, int n_actions, Rng& rng, const RandomMdpOptions& options) {
    if (n_states <= 0 || n_actions <= 0) throw ValidationError("random MDP dimensions must be positive");
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(n_states) * n_actions * n_states);
    for (int c = 0; c < n_states * n_actions; ++c) {
        const auto row = random_simplex_point(n_states, rng);
        t.insert(t.end(), row.begin(), row.end());
    }
    std::vector<RewardLaw> rewards;
    for (int c = 0; c < n_states * n_actions; ++c) {
        const double p = uniform01(rng);
        rewards.push_back(options.bernoulli_rewards ? RL::bernoulli(p) : RL::deterministic(p));
    }
    const double gamma = options.gamma_min + (options.gamma_max - options.gamma_min) * uniform01(rng);
    return {n_states, n_actions, std::move(t), std::move(rewards), gamma, random_simplex_point(n_states, rng)};
}

Policy random_policy(int n_states, int n_actions, Rng& rng) {
    std::vector<double> probs;
    for (int s = 0; s < n_states; ++s) {
        const auto row = random_simplex_point(n_actions, rng);
        probs.insert(probs.end(), row.begin(), row.end());
    }
    return {n_states, n_actions, std::move(probs)};
}

namespace {

// Irwin-Hall density of the sum of k uniforms on [0,1].
double irwin_hall_density(double x, int k) {
    if (x <= 0.0 || x >= k) return 0.0;
    double sum = 0.0;
    double binom = 1.0;
    double factorial = 1.0;
    for (int i = 1; i < k; ++i) factorial *= i;
    for (int j = 0; j <= static_cast<int>(std::floor(x)); ++j) {
        sum += (j % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(x - j, k - 1);
        binom = binom * (k - j) / (j + 1);
    }
    return sum / factorial;
}

double sum_of_uniforms(int k, Rng& rng) {
    double x = 0.0;
    for (int i = 0; i < k; ++i) x += uniform01(rng);
    return x;
}

constexpr int kNoiseTerms = 4;
constexpr double kNoiseScale = 0.05;
constexpr double kDriftShift = 0.05;

double walk_mean(double s, int a) { return 0.5 + 0.5 * (s - 0.5) + (a == 0 ? -kDriftShift : kDriftShift); }

} // namespace

ContinuousMdp random_walk_mdp(double gamma) {
    ContinuousMdp m;
    m.lower = {0.0};
    m.upper = {1.0};
    m.n_actions = 2;
    m.action_measure = 2.0;
    m.gamma = gamma;
    // s' = mean(s,a) + 0.05 (U1+..+U4 - 2), always inside [0.1, 0.9]
    m.transition_sampler = [](std::span<const double> s, int a, Rng& rng) {
        return std::vector<double>{walk_mean(s[0], a) + kNoiseScale * (sum_of_uniforms(kNoiseTerms, rng) - 2.0)};
    };
    m.transition_density = [](std::span<const double> s, int a, std::span<const double> next) {
        const double u = (next[0] - walk_mean(s[0], a)) / kNoiseScale + 2.0;
        return irwin_hall_density(u, kNoiseTerms) / kNoiseScale;
    };
    m.reward_fn = [](std::span<const double> s, int) { return s[0]; };
    m.mu0_sampler = [](Rng& rng) { return std::vector<double>{0.5 + 0.05 * (sum_of_uniforms(6, rng) - 3.0)}; };
    m.holder_beta = 2;
    // sup |d''| of each action's occupancy under the uniform policy is about 498,
    // from iterating the flow equation on a fine grid (checked in test_instances.cpp)
    m.holder_const = 500.0;
    return m;
}

double bump_density(double x, double width) {
    const double u = x - 0.5;
    if (std::abs(u) > width / 2) return 0.0;
    return (1.0 + std::cos(2.0 * std::numbers::pi * u / width)) / width;
}

ContinuousMdp iid_bump_mdp(double width, int n_actions, double gamma) {
    if (!(width > 0.0 && width < 1.0)) throw ValidationError("bump width must lie in (0,1)");
    ContinuousMdp m;
    m.lower = {0.0};
    m.upper = {1.0};
    m.n_actions = n_actions;
    m.action_measure = n_actions;
    m.gamma = gamma;
    auto draw = [width](Rng& rng) {
        // rejection from the uniform envelope of height 2/width
        for (;;) {
            const double x = 0.5 + width * (uniform01(rng) - 0.5);
            if (uniform01(rng) * 2.0 / width <= bump_density(x, width)) return std::vector<double>{x};
        }
    };
    m.transition_sampler = [draw](std::span<const double>, int, Rng& rng) { return draw(rng); };
    m.transition_density = [width](std::span<const double>, int, std::span<const double> next) {
        return bump_density(next[0], width);
    };
    m.reward_fn = [](std::span<const double>, int) { return 0.5; };
    m.mu0_sampler = draw;
    m.holder_beta = 2;
    const double pi = std::numbers::pi;
    // the occupancy of each action carries 1/n_actions of the state density
    m.holder_const = 4.0 * pi * pi / (width * width * width) / n_actions;
    return m;
}

} // namespace passive_rl::instances
