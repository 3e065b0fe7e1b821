#include "passive_rl/exact.hpp"

#include "passive_rl/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace passive_rl {

namespace {

constexpr double kFlowTolerance = 1e-10;

void check_shapes(const TabularMdp& mdp, const Policy& policy) {
    if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions())
        throw ValidationError("policy shape does not match the MDP");
}

// Row-stochastic state-to-state matrix under the policy.
Eigen::MatrixXd state_transition(const TabularMdp& mdp, const Policy& policy) {
    const int n = mdp.n_states();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < mdp.n_actions(); ++a) {
            const double w = policy.prob(s, a);
            if (w == 0.0) continue;
            const auto row = mdp.transition_row(s, a);
            for (int t = 0; t < n; ++t) p(s, t) += w * row[t];
        }
    return p;
}

OccupancyTable from_state_marginal(const Eigen::VectorXd& rho, const Policy& policy, bool normalized) {
    const int n = policy.n_states();
    const int m = policy.n_actions();
    std::vector<double> d(static_cast<std::size_t>(n) * m);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < m; ++a) d[static_cast<std::size_t>(s) * m + a] = std::max(0.0, rho(s)) * policy.prob(s, a);
    return {n, m, std::move(d), normalized};
}

} // namespace

OccupancyTable exact_occupancy(const TabularMdp& mdp, const Policy& policy) {
    check_shapes(mdp, policy);
    const int n = mdp.n_states();
    const double gamma = mdp.gamma();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - gamma * state_transition(mdp, policy).transpose();
    Eigen::VectorXd rhs(n);
    for (int s = 0; s < n; ++s) rhs(s) = (1.0 - gamma) * mdp.mu0()[s];

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd rho = lu.solve(rhs);
    // One step of iterative refinement tightens the residual on ill-conditioned chains.
    rho += lu.solve(rhs - system * rho);

    auto d = from_state_marginal(rho, policy, false);
    const double residual = flow_residual(mdp, d);
    if (!(residual <= kFlowTolerance)) {
        std::ostringstream os;
        os << "exact occupancy flow residual " << residual << " exceeds " << kFlowTolerance;
        throw NumericalError(os.str());
    }
    return OccupancyTable(d.n_states(), d.n_actions(), std::vector<double>(d.values().begin(), d.values().end()));
}

double flow_residual(const TabularMdp& mdp, const OccupancyTable& d) {
    const int n = mdp.n_states();
    if (d.n_states() != n || d.n_actions() != mdp.n_actions()) throw ValidationError("occupancy shape does not match the MDP");
    std::vector<double> inflow(n, 0.0);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < mdp.n_actions(); ++a) {
            const double mass = d.at(s, a);
            if (mass == 0.0) continue;
            const auto row = mdp.transition_row(s, a);
            for (int t = 0; t < n; ++t) inflow[t] += mass * row[t];
        }
    const auto marginal = d.state_marginal();
    double worst = 0.0;
    for (int s = 0; s < n; ++s) {
        const double r = marginal[s] - (1.0 - mdp.gamma()) * mdp.mu0()[s] - mdp.gamma() * inflow[s];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

OccupancyTable discounted_visits(const TabularMdp& mdp, const Policy& policy, int horizon) {
    check_shapes(mdp, policy);
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
    const int n = mdp.n_states();
    const int m = mdp.n_actions();
    std::vector<double> visits(static_cast<std::size_t>(n) * m, 0.0);
    std::vector<double> p(mdp.mu0().begin(), mdp.mu0().end());
    std::vector<double> next(n);
    double weight = 1.0;
    for (int h = 0; h <= horizon; ++h) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < n; ++s) {
            if (p[s] == 0.0) continue;
            for (int a = 0; a < m; ++a) {
                const double sa = p[s] * policy.prob(s, a);
                if (sa == 0.0) continue;
                visits[static_cast<std::size_t>(s) * m + a] += weight * sa;
                const auto row = mdp.transition_row(s, a);
                for (int t = 0; t < n; ++t) next[t] += sa * row[t];
            }
        }
        p.swap(next);
        weight *= mdp.gamma();
    }
    return {n, m, std::move(visits), false};
}

OccupancyTable exact_truncated_occupancy(const TabularMdp& mdp, const Policy& policy, int horizon) {
    const auto visits = discounted_visits(mdp, policy, horizon);
    const double g = mdp.gamma();
    const double scale = (1.0 - g) / (1.0 - std::pow(g, horizon + 1));
    std::vector<double> d(visits.values().begin(), visits.values().end());
    for (double& x : d) x *= scale;
    return {visits.n_states(), visits.n_actions(), std::move(d)};
}

double expected_reward(const TabularMdp& mdp, const OccupancyTable& d) {
    if (d.n_states() != mdp.n_states() || d.n_actions() != mdp.n_actions())
        throw ValidationError("occupancy shape does not match the MDP");
    double total = 0.0;
    for (int s = 0; s < mdp.n_states(); ++s)
        for (int a = 0; a < mdp.n_actions(); ++a) total += d.at(s, a) * mdp.mean_reward(s, a);
    return total;
}

double exact_value(const TabularMdp& mdp, const Policy& policy) {
    return expected_reward(mdp, exact_occupancy(mdp, policy)) / (1.0 - mdp.gamma());
}

OptimalSolution optimal_policy(const TabularMdp& mdp, double tol) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const int n = mdp.n_states();
    const int m = mdp.n_actions();
    const double gamma = mdp.gamma();

    auto q_value = [&](const std::vector<double>& v, int s, int a) {
        double q = mdp.mean_reward(s, a);
        const auto row = mdp.transition_row(s, a);
        for (int t = 0; t < n; ++t) q += gamma * row[t] * v[t];
        return q;
    };

    // A span of successive differences below tol (1-gamma)/gamma makes the greedy
    // policy tol-optimal.
    const double stop = tol * (1.0 - gamma) / gamma;
    std::vector<double> v(n, 0.0);
    std::vector<double> next(n);
    int iterations = 0;
    constexpr int kMaxIterations = 10'000'000;
    while (iterations < kMaxIterations) {
        ++iterations;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < m; ++a) best = std::max(best, q_value(v, s, a));
            next[s] = best;
            lo = std::min(lo, next[s] - v[s]);
            hi = std::max(hi, next[s] - v[s]);
        }
        v.swap(next);
        if (hi - lo <= stop) break;
    }

    std::vector<int> greedy(n);
    for (int s = 0; s < n; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> q(m);
        for (int a = 0; a < m; ++a) {
            q[a] = q_value(v, s, a);
            best = std::max(best, q[a]);
        }
        const double tie = 1e-12 * std::max(1.0, std::abs(best));
        int choice = 0;
        while (q[choice] < best - tie) ++choice;
        greedy[s] = choice;
    }
    auto policy = Policy::deterministic(greedy, m);
    const double value = exact_value(mdp, policy);
    return {std::move(policy), value, std::move(v), iterations};
}

double kl_divergence(const OccupancyTable& d1, const OccupancyTable& d2) {
    if (!d1.same_shape(d2)) throw ValidationError("occupancy shapes differ");
    double kl = 0.0;
    for (int s = 0; s < d1.n_states(); ++s) {
        for (int a = 0; a < d1.n_actions(); ++a) {
            const double p = d1.at(s, a);
            if (p == 0.0) continue;
            const double q = d2.at(s, a);
            if (q <= 0.0) {
                std::ostringstream os;
                os << "support violation at (s=" << s << ",a=" << a << "): reference has no mass";
                throw SupportError(os.str());
            }
            kl += p * std::log(p / q);
        }
    }
    return kl;
}

} // namespace passive_rl
