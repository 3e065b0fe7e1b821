#include "passive_rl/adversarial.hpp"
#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"
#include "passive_rl/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace passive_rl;

namespace {

OnlineConfig small_run(std::uint64_t seed) {
    OnlineConfig config;
    config.rounds = 20;
    config.episodes_per_round = 10;
    config.seed = seed;
    return config;
}

} // namespace

TEST(HardPair, RewardTables) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 1});
    EXPECT_NEAR(pair.m.mean_reward(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(pair.m_prime.mean_reward(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(pair.m_prime.mean_reward(1, 1), 0.7, 1e-15);
    EXPECT_NEAR(pair.m.mean_reward(1, 1), 0.5, 1e-15);
    for (Cell c : {Cell{0, 1}, Cell{1, 0}}) {
        EXPECT_EQ(pair.m.mean_reward(c.first, c.second), 0.5);
        EXPECT_EQ(pair.m_prime.mean_reward(c.first, c.second), 0.5);
    }
    EXPECT_EQ(pair.provenance, "static");
    for (double p : pair.m.transitions()) EXPECT_EQ(p, 0.5);
}

TEST(HardPair, ZeroGapMakesIdenticalMdps) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.0, {0, 1});
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) EXPECT_EQ(pair.m.mean_reward(s, a), pair.m_prime.mean_reward(s, a));
}

TEST(HardPair, OptimumOfPrimePlaysAdversarialCell) {
    const auto pair = make_hard_pair(3, 2, 0.9, 0.15, {2, 1});
    const auto opt = optimal_policy(pair.m_prime);
    EXPECT_EQ(opt.policy.argmax(2), 1);
    EXPECT_EQ(optimal_policy(pair.m).policy.argmax(0), 0);
}

TEST(HardPair, RejectsInvalidConstruction) {
    EXPECT_THROW(make_hard_pair(2, 2, 0.9, 0.3, {0, 1}), ValidationError);
    EXPECT_THROW(make_hard_pair(2, 2, 0.9, -0.1, {0, 1}), ValidationError);
    EXPECT_THROW(make_hard_pair(2, 2, 0.9, 0.1, {0, 0}), ValidationError);
    EXPECT_THROW(make_hard_pair(2, 2, 0.9, 0.1, {2, 0}), ValidationError);
    EXPECT_THROW(make_hard_pair(1, 1, 0.9, 0.1, {0, 0}), ValidationError);
}

TEST(OptimalDelta, ReferenceValue) {
    EXPECT_NEAR(optimal_delta(2, 2, 0.5, 1.0, 10, 100), std::sqrt(0.002), 1e-15);
    EXPECT_NEAR(optimal_delta(2, 2, 0.5, 1.0, 10, 100), 0.04472, 1e-5);
}

TEST(OptimalDelta, QuadrupledRoundsHalveDelta) {
    EXPECT_NEAR(optimal_delta(2, 2, 0.9, 8.0, 10, 400), optimal_delta(2, 2, 0.9, 8.0, 10, 100) / 2, 1e-15);
}

TEST(OptimalDelta, ClampsToQuarter) { EXPECT_EQ(optimal_delta(50, 50, 0.5, 1.0, 1, 1), 0.25); }

TEST(BernoulliKl, Identity) {
    for (double p : {0.0, 0.3, 1.0}) EXPECT_EQ(bernoulli_kl(p, p), 0.0);
}

TEST(BernoulliKl, HandValue) {
    EXPECT_NEAR(bernoulli_kl(0.5, 0.7), 0.5 * std::log(0.5 / 0.7) + 0.5 * std::log(0.5 / 0.3), 1e-15);
    EXPECT_NEAR(bernoulli_kl(0.5, 0.7), 0.0872, 5e-5);
    EXPECT_TRUE(std::isinf(bernoulli_kl(0.5, 1.0)));
    EXPECT_NEAR(bernoulli_kl(1.0, 0.5), std::log(2.0), 1e-15);
}

TEST(BernoulliKl, QuadraticNearHalf) {
    double previous_error = 1.0;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        const double ratio = bernoulli_kl(0.5, 0.5 + 2 * delta) / (delta * delta);
        EXPECT_NEAR(ratio, 8.0, 50 * delta);
        EXPECT_LT(std::abs(ratio - 8.0), previous_error);
        previous_error = std::abs(ratio - 8.0);
    }
}

TEST(VisitStats, ConservationPerEpisode) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pair = make_hard_pair(2, 2, 0.8, 0.1, {1, 0});
        const auto policy = instances::random_policy(2, 2, rng);
        for (int h : {0, 3, 9}) {
            const auto visits = expected_visits(pair.m, policy, h);
            EXPECT_NEAR(visits.total(), (1 - std::pow(0.8, h + 1)) / 0.2, 1e-9);
        }
    }
}

TEST(VisitStats, RunAccumulationAndArgmin) {
    const auto mdp = instances::benchmark_2x2();
    const std::vector<Policy> policies{Policy::uniform(2, 2), Policy::deterministic(std::vector<int>{0, 0}, 2)};
    const auto run = expected_visits(mdp, policies, 5, 4);
    EXPECT_NEAR(run.total(), 2 * 5 * (1 - std::pow(0.9, 5)) / 0.1, 1e-9);
    // action 1 is played only by the uniform policy
    const Cell least = run.argmin_excluding({0, 0});
    EXPECT_EQ(least.second, 1);
}

TEST(HistoryKl, IdenticalPairIsZero) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.0, {1, 1});
    EXPECT_EQ(enumerate_history_kl(pair, Policy::uniform(2, 2), 2), 0.0);
    EXPECT_EQ(occupancy_weighted_kl(pair, Policy::uniform(2, 2), 2), 0.0);
}

TEST(HistoryKl, SingleStepClosedForm) {
    auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 1});
    // start in the adversarial state and always play the adversarial action
    pair.m = pair.m.with_initial({0.0, 1.0});
    pair.m_prime = pair.m_prime.with_initial({0.0, 1.0});
    const auto policy = Policy::deterministic(std::vector<int>{1, 1}, 2);
    EXPECT_NEAR(enumerate_history_kl(pair, policy, 0), bernoulli_kl(0.5, 0.7), 1e-12);
    EXPECT_NEAR(occupancy_weighted_kl(pair, policy, 0), bernoulli_kl(0.5, 0.7), 1e-12);
}

TEST(HistoryKl, EnumerationMatchesDecompositionUniformPolicy) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {0, 1});
    const auto policy = Policy::uniform(2, 2);
    EXPECT_NEAR(enumerate_history_kl(pair, policy, 2), occupancy_weighted_kl(pair, policy, 2), 1e-9);
}

TEST(HistoryKl, OnlyAdversarialCellContributes) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.2, {1, 0});
    const auto policy = Policy::uniform(2, 2);
    const auto visits = expected_visits(pair.m, policy, 3);
    EXPECT_NEAR(occupancy_weighted_kl(pair, policy, 3), visits.at(1, 0) * bernoulli_kl(0.5, 0.9), 1e-12);
}

TEST(HistoryKl, EqualityOnRandomPoliciesAndShapes) {
    Rng rng(6);
    for (int n = 1; n <= 2; ++n)
        for (int m = 1; m <= 2; ++m) {
            if (n * m < 2) continue;
            const Cell cell = n == 2 ? Cell{1, 0} : Cell{0, 1};
            const auto pair = make_hard_pair(n, m, 0.7, 0.2, cell);
            for (int p = 0; p < 10; ++p) {
                const auto policy = instances::random_policy(n, m, rng);
                for (int h = 0; h <= 3; ++h)
                    EXPECT_NEAR(enumerate_history_kl(pair, policy, h), occupancy_weighted_kl(pair, policy, h), 1e-9);
            }
        }
}

TEST(HistoryKl, GuardRefusesLargeHistories) {
    const auto pair = make_hard_pair(3, 3, 0.9, 0.1, {1, 1});
    EXPECT_THROW(enumerate_history_kl(pair, Policy::uniform(3, 3), 6), EnumerationGuardError);
}

TEST(PairLowerBound, HandValue) {
    const double lb = pair_lower_bound(2, 2, 0.9, 0.05, 8.0, 10, 20);
    const double expected = 10 * 20 * 0.05 / (2 * 0.1) * (1 - std::sqrt(10 * 20 * 8 * 0.0025 / (0.1 * 4)));
    EXPECT_NEAR(lb, expected, 1e-12);
}

TEST(PairLowerBound, OptimalDeltaZeroesTheFactor) {
    // with the same c, delta^2 n T c / ((1-gamma) S A) = 1 exactly
    const double delta = optimal_delta(2, 2, 0.9, 8.0, 10, 20);
    EXPECT_NEAR(pair_lower_bound(2, 2, 0.9, delta, 8.0, 10, 20), 0.0, 1e-12);
}

TEST(Learners, ParseAndName) {
    for (auto kind : {LearnerKind::uniform, LearnerKind::passive, LearnerKind::oracle})
        EXPECT_EQ(parse_learner(learner_name(kind)), kind);
    EXPECT_THROW(parse_learner("greedy"), ValidationError);
}

TEST(Learners, UniformPairSumAboveLowerBound) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.05, {1, 1});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto result = evaluate_learner_on_pair(LearnerKind::uniform, pair, small_run(seed));
        EXPECT_GE(result.pair_sum(), result.lower_bound_value);
        EXPECT_GT(result.r_m, 0.0);
        EXPECT_GT(result.r_m_prime, result.r_m);
    }
}

TEST(Learners, UniformGapsHaveClosedForm) {
    // uniform transitions and mu0 keep the state law uniform whatever the policy
    const double delta = 0.1;
    const auto pair = make_hard_pair(2, 2, 0.9, delta, {1, 1});
    const auto result = evaluate_learner_on_pair(LearnerKind::uniform, pair, small_run(1));
    EXPECT_NEAR(result.r_m, 10 * 20 * 0.25 * delta / 0.1, 1e-9);
    EXPECT_NEAR(result.r_m_prime, 10 * 20 * 0.75 * delta / 0.1, 1e-9);
}

TEST(Learners, OracleHasZeroRegret) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {0, 1});
    const auto result = evaluate_learner_on_pair(LearnerKind::oracle, pair, small_run(3));
    EXPECT_NEAR(result.r_m, 0.0, 1e-9);
    EXPECT_NEAR(result.r_m_prime, 0.0, 1e-9);
    EXPECT_GE(result.pair_sum(), 0.0);
}

TEST(Learners, PassiveRegretsNonnegative) {
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 1});
    const auto result = evaluate_learner_on_pair(LearnerKind::passive, pair, small_run(4));
    EXPECT_GE(result.r_m, -1e-9);
    EXPECT_GE(result.r_m_prime, -1e-9);
}

TEST(Learners, AdaptivePairAvoidsSpecialCell) {
    for (auto kind : {LearnerKind::uniform, LearnerKind::passive}) {
        const auto pair = make_adaptive_pair(kind, 2, 2, 0.9, 0.1, small_run(2));
        EXPECT_EQ(pair.provenance, "adaptive");
        EXPECT_NE(pair.adversarial_cell, (Cell{0, 0}));
    }
}

TEST(Learners, SwappingScoredMdpKeepsPairSum) {
    // the uniform learner is deterministic, so the swap is exact
    const auto pair = make_hard_pair(2, 2, 0.9, 0.1, {1, 0});
    HardPair swapped = pair;
    std::swap(swapped.m, swapped.m_prime);
    const auto a = evaluate_learner_on_pair(LearnerKind::uniform, pair, small_run(5));
    const auto b = evaluate_learner_on_pair(LearnerKind::uniform, swapped, small_run(5));
    EXPECT_NEAR(a.pair_sum(), b.pair_sum(), 1e-9);
}
