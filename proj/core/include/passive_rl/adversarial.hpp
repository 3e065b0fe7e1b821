#pragma once

#include "passive_rl/mdp.hpp"
#include "passive_rl/online.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace passive_rl {

using Cell = std::pair<int, int>;

/// Two MDPs with uniform transitions that differ only in the reward of one cell:
/// m pays Ber(1/2 + delta) at the special cell and Ber(1/2) elsewhere; m_prime also
/// pays Ber(1/2 + 2 delta) at the adversarial cell.
struct HardPair {
    TabularMdp m;
    TabularMdp m_prime;
    Cell special_cell{0, 0};
    Cell adversarial_cell{0, 1};
    double delta = 0.0;
    /// "static" or "adaptive".
    std::string provenance;
};

/// Throws ValidationError when delta is outside [0, 1/4], the table has fewer than
/// two cells, or the adversarial cell is the special cell or out of range.
HardPair make_hard_pair(int n_states, int n_actions, double gamma, double delta, Cell adversarial_cell);

/// sqrt(S A (1-gamma) / (c n T)) clamped to (0, 1/4].
double optimal_delta(int n_states, int n_actions, double gamma, double c, long long n, long long rounds);

/// Bernoulli KL with 0 log 0 = 0; +infinity when q is 0 or 1 and p differs from q.
double bernoulli_kl(double p, double q);

/// Expected discounted visits E[T_{s,a}(H)] per cell (weights gamma^h, h = 0..H,
/// unnormalized) accumulated over a run.
struct VisitStats {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> visits;

    double at(int s, int a) const { return visits[static_cast<std::size_t>(s) * n_actions + a]; }
    double total() const;
    /// Least-visited cell other than `excluded`; ties go to the lowest index.
    Cell argmin_excluding(Cell excluded) const;
};

/// Visits of one episode under `policy` truncated at H.
VisitStats expected_visits(const TabularMdp& mdp, const Policy& policy, int horizon);

/// n episodes per round under each deployed policy of a run.
VisitStats expected_visits(const TabularMdp& mdp, std::span<const Policy> policies, int n, int horizon);

/// KL between the history laws of one truncated episode under m and m_prime, by full
/// enumeration of (state, action, reward observation) sequences. The reward of step h
/// is observed with probability gamma^h and censored otherwise, so each step enters
/// with its discount weight. Throws EnumerationGuardError when
/// (S A 2)^(H+1) > 1e7.
double enumerate_history_kl(const HardPair& pair, const Policy& policy, int horizon);

/// Sum over cells of E[T_{s,a}(H)] KL(p_{s,a} || p'_{s,a}) with the visits of one episode.
double occupancy_weighted_kl(const HardPair& pair, const Policy& policy, int horizon);

/// n T Delta / (2 (1-gamma)) (1 - sqrt(n T c Delta^2 / ((1-gamma) S A))).
double pair_lower_bound(int n_states, int n_actions, double gamma, double delta, double c, long long n,
                        long long rounds);

enum class LearnerKind {
    /// Plays the uniform policy every round.
    uniform,
    /// run_online from a uniform memory.
    passive,
    /// Plays the optimal policy of whichever MDP it faces.
    oracle,
};

LearnerKind parse_learner(const std::string& name);
std::string learner_name(LearnerKind kind);

/// Runs a learner on one MDP. Regret is scored exactly against the MDP's optimum.
RegretRecord run_learner(LearnerKind kind, const TabularMdp& mdp, const OnlineConfig& config);

struct PairResult {
    /// n times the cumulative per-round gap on each MDP.
    double r_m = 0.0;
    double r_m_prime = 0.0;
    double lower_bound_value = 0.0;
    double delta = 0.0;
    Cell adversarial_cell;
    double pair_sum() const noexcept { return r_m + r_m_prime; }
};

/// Runs the learner on pair.m with seed derive_seed(config.seed, 0) and on
/// pair.m_prime with derive_seed(config.seed, 1). The lower bound uses c = 8.
PairResult evaluate_learner_on_pair(LearnerKind kind, const HardPair& pair, const OnlineConfig& config);

/// Adaptive construction: run the learner on m (adversarial cell irrelevant there),
/// pick the least-visited cell other than (0,0) under its deployed policies, and build
/// the pair around it.
HardPair make_adaptive_pair(LearnerKind kind, int n_states, int n_actions, double gamma, double delta,
                            const OnlineConfig& config);

} // namespace passive_rl
