#include "passive_rl/adversarial.hpp"

#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"

#include <cmath>
#include <limits>

namespace passive_rl {

namespace {

constexpr double kQuadraticKlConstant = 8.0;
constexpr double kEnumerationLimit = 1e7;

TabularMdp hard_mdp(int n_states, int n_actions, double gamma, std::vector<double> reward_params) {
    const std::size_t cells = static_cast<std::size_t>(n_states) * n_actions;
    std::vector<double> transition(cells * n_states, 1.0 / n_states);
    std::vector<RewardLaw> rewards;
    rewards.reserve(cells);
    for (double p : reward_params) rewards.push_back(RewardLaw::bernoulli(p));
    return {n_states, n_actions, std::move(transition), std::move(rewards), gamma,
            std::vector<double>(n_states, 1.0 / n_states)};
}

RegretRecord fixed_policy_run(const TabularMdp& mdp, const Policy& policy, const OnlineConfig& config) {
    const double optimum = optimal_policy(mdp, 1e-12).value;
    const double gap = optimum - exact_value(mdp, policy);
    RegretRecord record;
    record.optimal_value = optimum;
    for (int t = 0; t < config.rounds; ++t) {
        record.per_round_gap.push_back(gap);
        record.cumulative.push_back((record.cumulative.empty() ? 0.0 : record.cumulative.back()) + gap);
        record.policies.push_back(policy);
        record.eta.push_back(0.0);
        record.solver_iters.push_back(0);
        record.estimator_error_bound.push_back(0.0);
    }
    return record;
}

} // namespace

HardPair make_hard_pair(int n_states, int n_actions, double gamma, double delta, Cell adversarial_cell) {
    if (n_states < 1 || n_actions < 1 || n_states * n_actions < 2)
        throw ValidationError("the hard pair needs at least two cells");
    if (!(delta >= 0.0 && delta <= 0.25)) throw ValidationError("delta must lie in [0, 1/4]");
    const auto [s_bar, a_bar] = adversarial_cell;
    if (s_bar < 0 || s_bar >= n_states || a_bar < 0 || a_bar >= n_actions)
        throw ValidationError("adversarial cell is out of range");
    const Cell special{0, 0};
    if (adversarial_cell == special) throw ValidationError("adversarial cell must differ from the special cell (0,0)");

    const std::size_t cells = static_cast<std::size_t>(n_states) * n_actions;
    std::vector<double> p(cells, 0.5);
    p[0] = 0.5 + delta;
    std::vector<double> p_prime = p;
    p_prime[static_cast<std::size_t>(s_bar) * n_actions + a_bar] = 0.5 + 2.0 * delta;
    return {hard_mdp(n_states, n_actions, gamma, std::move(p)), hard_mdp(n_states, n_actions, gamma, std::move(p_prime)),
            special, adversarial_cell, delta, "static"};
}

double optimal_delta(int n_states, int n_actions, double gamma, double c, long long n, long long rounds) {
    if (n_states < 1 || n_actions < 1 || !(c > 0.0) || n < 1 || rounds < 1)
        throw ValidationError("optimal_delta inputs must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    const double d = std::sqrt(static_cast<double>(n_states) * n_actions * (1.0 - gamma) /
                               (c * static_cast<double>(n) * static_cast<double>(rounds)));
    return std::min(d, 0.25);
}

double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) throw ValidationError("Bernoulli parameters must lie in [0,1]");
    auto term = [](double x, double y) {
        if (x == 0.0) return 0.0;
        if (y == 0.0) return std::numeric_limits<double>::infinity();
        return x * std::log(x / y);
    };
    return term(p, q) + term(1.0 - p, 1.0 - q);
}

double VisitStats::total() const {
    double t = 0.0;
    for (double v : visits) t += v;
    return t;
}

Cell VisitStats::argmin_excluding(Cell excluded) const {
    Cell best{-1, -1};
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            if (Cell{s, a} == excluded) continue;
            if (at(s, a) < best_value) {
                best_value = at(s, a);
                best = {s, a};
            }
        }
    }
    return best;
}

VisitStats expected_visits(const TabularMdp& mdp, const Policy& policy, int horizon) {
    const auto table = discounted_visits(mdp, policy, horizon);
    return {mdp.n_states(), mdp.n_actions(), {table.values().begin(), table.values().end()}};
}

VisitStats expected_visits(const TabularMdp& mdp, std::span<const Policy> policies, int n, int horizon) {
    VisitStats stats{mdp.n_states(), mdp.n_actions(), std::vector<double>(mdp.n_cells(), 0.0)};
    for (const auto& policy : policies) {
        const auto one = discounted_visits(mdp, policy, horizon);
        for (std::size_t i = 0; i < stats.visits.size(); ++i) stats.visits[i] += n * one.values()[i];
    }
    return stats;
}

double enumerate_history_kl(const HardPair& pair, const Policy& policy, int horizon) {
    const TabularMdp& m = pair.m;
    const TabularMdp& mp = pair.m_prime;
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
    if (policy.n_states() != m.n_states() || policy.n_actions() != m.n_actions())
        throw ValidationError("policy shape does not match the pair");
    const double branches = 2.0 * m.n_states() * m.n_actions();
    if (std::pow(branches, horizon + 1) > kEnumerationLimit)
        throw EnumerationGuardError("history enumeration exceeds 1e7 branches: (S A 2)^(H+1) = " +
                                    std::to_string(std::pow(branches, horizon + 1)));
    const int n_states = m.n_states();
    const int n_actions = m.n_actions();
    const double gamma = m.gamma();
    double kl = 0.0;

    // Depth-first over (s_h, a_h, reward observation) for h = 0..H, carrying the path
    // probability under each MDP.
    const auto visit = [&](auto&& self, int h, int s, double prob, double prob_prime, double reveal) -> void {
        for (int a = 0; a < n_actions; ++a) {
            const double pa = policy.prob(s, a);
            if (pa == 0.0) continue;
            const double p = m.reward(s, a).mean();
            const double q = mp.reward(s, a).mean();
            const double pa_prime = policy.prob(s, a);
            // observation 0: r = 0, 1: r = 1, 2: censored
            for (int obs = 0; obs < 3; ++obs) {
                double w = 0.0;
                double w_prime = 0.0;
                if (obs == 2) {
                    w = w_prime = 1.0 - reveal;
                } else {
                    w = reveal * (obs == 1 ? p : 1.0 - p);
                    w_prime = reveal * (obs == 1 ? q : 1.0 - q);
                }
                const double next = prob * pa * w;
                const double next_prime = prob_prime * pa_prime * w_prime;
                if (next == 0.0) continue;
                if (h == horizon) {
                    kl += next * (std::log(next) - std::log(next_prime));
                    continue;
                }
                for (int t = 0; t < n_states; ++t) {
                    const double tr = m.transition(s, a, t);
                    const double tr_prime = mp.transition(s, a, t);
                    if (tr == 0.0) continue;
                    self(self, h + 1, t, next * tr, next_prime * tr_prime, reveal * gamma);
                }
            }
        }
    };
    for (int s = 0; s < n_states; ++s) {
        if (m.mu0()[s] == 0.0) continue;
        visit(visit, 0, s, m.mu0()[s], mp.mu0()[s], 1.0);
    }
    return kl;
}

double occupancy_weighted_kl(const HardPair& pair, const Policy& policy, int horizon) {
    const auto visits = expected_visits(pair.m, policy, horizon);
    double total = 0.0;
    for (int s = 0; s < pair.m.n_states(); ++s) {
        for (int a = 0; a < pair.m.n_actions(); ++a) {
            const double v = visits.at(s, a);
            if (v == 0.0) continue;
            total += v * bernoulli_kl(pair.m.reward(s, a).mean(), pair.m_prime.reward(s, a).mean());
        }
    }
    return total;
}

double pair_lower_bound(int n_states, int n_actions, double gamma, double delta, double c, long long n,
                        long long rounds) {
    const double nt = static_cast<double>(n) * static_cast<double>(rounds);
    const double scale = nt * delta / (2.0 * (1.0 - gamma));
    return scale * (1.0 - std::sqrt(nt * c * delta * delta / ((1.0 - gamma) * n_states * n_actions)));
}

LearnerKind parse_learner(const std::string& name) {
    if (name == "uniform") return LearnerKind::uniform;
    if (name == "passive") return LearnerKind::passive;
    if (name == "oracle") return LearnerKind::oracle;
    throw ValidationError("unknown learner '" + name + "' (expected uniform, passive or oracle)");
}

std::string learner_name(LearnerKind kind) {
    switch (kind) {
    case LearnerKind::uniform: return "uniform";
    case LearnerKind::passive: return "passive";
    case LearnerKind::oracle: return "oracle";
    }
    return "unknown";
}

RegretRecord run_learner(LearnerKind kind, const TabularMdp& mdp, const OnlineConfig& config) {
    switch (kind) {
    case LearnerKind::uniform:
        return fixed_policy_run(mdp, Policy::uniform(mdp.n_states(), mdp.n_actions()), config);
    case LearnerKind::oracle:
        return fixed_policy_run(mdp, optimal_policy(mdp, 1e-12).policy, config);
    case LearnerKind::passive:
        return run_online(mdp, memory_from_table(OccupancyTable::uniform(mdp.n_states(), mdp.n_actions()),
                                                 config.smoothing_floor),
                          config);
    }
    throw ValidationError("unknown learner");
}

PairResult evaluate_learner_on_pair(LearnerKind kind, const HardPair& pair, const OnlineConfig& config) {
    OnlineConfig on_m = config;
    on_m.seed = derive_seed(config.seed, 0);
    OnlineConfig on_m_prime = config;
    on_m_prime.seed = derive_seed(config.seed, 1);
    const auto run_m = run_learner(kind, pair.m, on_m);
    const auto run_m_prime = run_learner(kind, pair.m_prime, on_m_prime);
    PairResult result;
    result.r_m = config.episodes_per_round * run_m.total();
    result.r_m_prime = config.episodes_per_round * run_m_prime.total();
    result.delta = pair.delta;
    result.adversarial_cell = pair.adversarial_cell;
    result.lower_bound_value = pair_lower_bound(pair.m.n_states(), pair.m.n_actions(), pair.m.gamma(), pair.delta,
                                                kQuadraticKlConstant, config.episodes_per_round, config.rounds);
    return result;
}

HardPair make_adaptive_pair(LearnerKind kind, int n_states, int n_actions, double gamma, double delta,
                            const OnlineConfig& config) {
    // m does not depend on the adversarial cell; any valid placeholder works.
    const Cell placeholder = n_actions > 1 ? Cell{0, 1} : Cell{1, 0};
    const auto probe = make_hard_pair(n_states, n_actions, gamma, delta, placeholder);
    OnlineConfig on_m = config;
    on_m.seed = derive_seed(config.seed, 0);
    const auto run = run_learner(kind, probe.m, on_m);
    const auto visits =
        expected_visits(probe.m, run.policies, config.episodes_per_round, resolve_horizon(config, gamma));
    auto pair = make_hard_pair(n_states, n_actions, gamma, delta, visits.argmin_excluding(probe.special_cell));
    pair.provenance = "adaptive";
    return pair;
}

} // namespace passive_rl
