#include "passive_rl/dual_solver.hpp"

#include "passive_rl/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace passive_rl {

DualProblem::DualProblem(const TabularMdp& mdp, const OccupancyTable& ref, double eta)
    : n_states_(mdp.n_states()), n_actions_(mdp.n_actions()), gamma_(mdp.gamma()), eta_(eta),
      mu0_(mdp.mu0().begin(), mdp.mu0().end()) {
    if (ref.n_states() != n_states_ || ref.n_actions() != n_actions_)
        throw ValidationError("reference shape does not match the MDP");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive and finite");
    for (int s = 0; s < n_states_; ++s) {
        for (int a = 0; a < n_actions_; ++a) {
            const double r = ref.at(s, a);
            if (r <= 0.0) continue;
            cell_state_.push_back(s);
            cell_action_.push_back(a);
            base_.push_back(std::log(r) + eta * mdp.mean_reward(s, a));
            const auto row = mdp.transition_row(s, a);
            transition_.insert(transition_.end(), row.begin(), row.end());
        }
    }
    if (base_.empty()) throw ValidationError("reference distribution has no mass");
}

void DualProblem::check(const DualPotential& v) const {
    if (v.v.size() != static_cast<std::size_t>(n_states_)) throw ValidationError("potential has the wrong size");
}

double DualProblem::exponents(const DualPotential& v, std::vector<double>& z) const {
    check(v);
    const std::size_t cells = base_.size();
    z.resize(cells);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cells; ++c) {
        const double* row = transition_.data() + c * n_states_;
        double tv = 0.0;
        for (int t = 0; t < n_states_; ++t) tv += row[t] * v.v[t];
        z[c] = base_[c] + gamma_ * tv - v.v[cell_state_[c]];
        peak = std::max(peak, z[c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < cells; ++c) sum += std::exp(z[c] - peak);
    return peak + std::log(sum);
}

double DualProblem::objective(const DualPotential& v) const {
    std::vector<double> z;
    const double lse = exponents(v, z);
    double linear = 0.0;
    for (int s = 0; s < n_states_; ++s) linear += mu0_[s] * v.v[s];
    return (1.0 - gamma_) * linear + lse;
}

OccupancyTable DualProblem::weights(const DualPotential& v) const {
    std::vector<double> z;
    const double lse = exponents(v, z);
    std::vector<double> w(static_cast<std::size_t>(n_states_) * n_actions_, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double x = std::exp(z[c] - lse);
        w[static_cast<std::size_t>(cell_state_[c]) * n_actions_ + cell_action_[c]] = x;
        total += x;
    }
    for (double& x : w) x /= total;
    return {n_states_, n_actions_, std::move(w)};
}

std::vector<double> DualProblem::gradient(const DualPotential& v) const {
    std::vector<double> z;
    const double lse = exponents(v, z);
    std::vector<double> g(n_states_);
    for (int s = 0; s < n_states_; ++s) g[s] = (1.0 - gamma_) * mu0_[s];
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double w = std::exp(z[c] - lse);
        if (w == 0.0) continue;
        g[cell_state_[c]] -= w;
        const double* row = transition_.data() + c * n_states_;
        for (int t = 0; t < n_states_; ++t) g[t] += gamma_ * w * row[t];
    }
    return g;
}

std::vector<double> DualProblem::hessian(const DualPotential& v) const {
    std::vector<double> z;
    const double lse = exponents(v, z);
    const int n = n_states_;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd b(n);
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double w = std::exp(z[c] - lse);
        if (w == 0.0) continue;
        const double* row = transition_.data() + c * n;
        for (int t = 0; t < n; ++t) b(t) = gamma_ * row[t];
        b(cell_state_[c]) -= 1.0;
        h.noalias() += w * b * b.transpose();
        mean += w * b;
    }
    h.noalias() -= mean * mean.transpose();
    return {h.data(), h.data() + static_cast<std::size_t>(n) * n};
}

double dual_objective(const DualPotential& v, const OccupancyTable& ref_dist, const TabularMdp& mdp, double eta) {
    return DualProblem(mdp, ref_dist, eta).objective(v);
}

std::vector<double> dual_gradient(const DualPotential& v, const OccupancyTable& ref_dist, const TabularMdp& mdp,
                                  double eta) {
    return DualProblem(mdp, ref_dist, eta).gradient(v);
}

namespace {

double inf_norm(const std::vector<double>& g) {
    double m = 0.0;
    for (double x : g) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> newton_direction(const DualProblem& problem, const DualPotential& v,
                                     const std::vector<double>& g) {
    const int n = problem.n_states();
    const auto hv = problem.hessian(v);
    Eigen::Map<const Eigen::MatrixXd> h(hv.data(), n, n);
    // The constant direction is always in the null space; a tiny ridge keeps the
    // factorization well posed without changing the step on the range.
    const double ridge = 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
    const Eigen::MatrixXd damped = h + ridge * Eigen::MatrixXd::Identity(n, n);
    const Eigen::Map<const Eigen::VectorXd> grad(g.data(), n);
    const Eigen::VectorXd p = -damped.ldlt().solve(grad);
    std::vector<double> dir(p.data(), p.data() + n);
    double slope = 0.0;
    for (int i = 0; i < n; ++i) slope += dir[i] * g[i];
    if (!(slope < 0.0) || !std::isfinite(slope)) {
        for (int i = 0; i < n; ++i) dir[i] = -g[i];
    }
    return dir;
}

} // namespace

SolveReport solve_dual(const OccupancyTable& ref_dist, const TabularMdp& mdp, double eta, const SolverOptions& options) {
    if (!(options.tol > 0.0)) throw ValidationError("solver tolerance must be positive");
    if (options.max_iters < 0) throw ValidationError("max_iters must be nonnegative");
    const DualProblem problem(mdp, ref_dist, eta);
    const int n = problem.n_states();

    SolveReport report;
    DualPotential v{std::vector<double>(n, 0.0)};
    double f = problem.objective(v);
    auto g = problem.gradient(v);
    if (options.record_history) report.objective_history.push_back(f);

    double step = 1.0;
    int iter = 0;
    bool stalled = false;
    while (inf_norm(g) > options.tol && iter < options.max_iters) {
        std::vector<double> dir;
        if (options.method == DescentMethod::newton) {
            dir = newton_direction(problem, v, g);
            step = 1.0;
        } else {
            dir.resize(n);
            for (int i = 0; i < n; ++i) dir[i] = -g[i];
            step = std::min(2.0 * step, 1e6);
        }
        double slope = 0.0;
        for (int i = 0; i < n; ++i) slope += dir[i] * g[i];

        DualPotential trial{std::vector<double>(n)};
        double f_trial = f;
        std::vector<double> g_trial;
        bool accepted = false;
        // below this the objective cannot resolve the predicted decrease
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
        while (step > 1e-20) {
            for (int i = 0; i < n; ++i) trial.v[i] = v.v[i] + step * dir[i];
            f_trial = problem.objective(trial);
            if (f_trial <= f + options.armijo * step * slope) {
                accepted = true;
                break;
            }
            if (std::abs(step * slope) < noise && f_trial <= f + noise) {
                g_trial = problem.gradient(trial);
                if (inf_norm(g_trial) < inf_norm(g)) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        v = std::move(trial);
        f = f_trial;
        g = g_trial.empty() ? problem.gradient(v) : std::move(g_trial);
        ++iter;
        if (options.record_history) report.objective_history.push_back(f);
    }

    report.grad_inf_norm = inf_norm(g);
    report.converged = !stalled && report.grad_inf_norm <= options.tol;
    report.iterations = iter;
    report.objective = f;
    report.v_star = std::move(v);
    return report;
}

OccupancyTable extract_occupancy(const DualPotential& v_star, const OccupancyTable& ref_dist, const TabularMdp& mdp,
                                 double eta) {
    return DualProblem(mdp, ref_dist, eta).weights(v_star);
}

Policy extract_policy(const OccupancyTable& d_tilde) {
    const int n = d_tilde.n_states();
    const int m = d_tilde.n_actions();
    std::vector<double> probs(static_cast<std::size_t>(n) * m);
    for (int s = 0; s < n; ++s) {
        double mass = 0.0;
        for (int a = 0; a < m; ++a) mass += d_tilde.at(s, a);
        for (int a = 0; a < m; ++a) {
            probs[static_cast<std::size_t>(s) * m + a] = mass < 1e-12 ? 1.0 / m : d_tilde.at(s, a) / mass;
        }
    }
    return {n, m, std::move(probs)};
}

} // namespace passive_rl
