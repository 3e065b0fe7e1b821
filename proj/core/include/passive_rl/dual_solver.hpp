#pragma once

#include "passive_rl/mdp.hpp"
#include "passive_rl/occupancy.hpp"

#include <vector>

namespace passive_rl {

/// State potential V of the KL-regularized dual.
struct DualPotential {
    std::vector<double> v;
};

enum class DescentMethod {
    /// Steepest descent, Armijo backtracking by halving.
    gradient,
    /// Damped Newton on the (positive semidefinite) Hessian, same Armijo backtracking.
    newton,
};

struct SolverOptions {
    double tol = 1e-8;
    int max_iters = 100'000;
    DescentMethod method = DescentMethod::gradient;
    /// Armijo sufficient-decrease constant.
    double armijo = 1e-4;
    /// Keep the objective after every accepted step in SolveReport::objective_history.
    bool record_history = false;
};

struct SolveReport {
    DualPotential v_star;
    double objective = 0.0;
    double grad_inf_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_history;
};

/// The dual objective for a fixed (reference, MDP, eta). Cells where the reference
/// is zero drop out of the log-partition sum.
///
///   f(v) = (1-gamma) <mu0, v> + log sum_{s,a} ref(s,a) exp(eta R(s,a) + gamma (Tv)(s,a) - v(s))
///
/// eta = 1 is the unscaled regularized LP. R is the mean reward of each cell.
/// The problem copies what it needs, so it does not borrow its arguments.
class DualProblem {
public:
    DualProblem(const TabularMdp& mdp, const OccupancyTable& ref, double eta);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    double eta() const noexcept { return eta_; }

    double objective(const DualPotential& v) const;
    std::vector<double> gradient(const DualPotential& v) const;
    /// Softmax weights w(s,a) = ref e^{z} / Z laid out as an occupancy table.
    OccupancyTable weights(const DualPotential& v) const;
    /// Covariance of (gamma T(.|s,a) - e_s) under the weights, row-major n x n.
    std::vector<double> hessian(const DualPotential& v) const;

private:
    // Exponents log ref + eta R + gamma Tv - v(s) of the support cells and their
    // log-sum-exp (max-shifted).
    double exponents(const DualPotential& v, std::vector<double>& z) const;
    void check(const DualPotential& v) const;

    int n_states_;
    int n_actions_;
    double gamma_;
    double eta_;
    std::vector<double> mu0_;
    // support cells only
    std::vector<int> cell_state_;
    std::vector<int> cell_action_;
    std::vector<double> base_;              // log ref + eta R
    std::vector<double> transition_;        // [cell][s']
};

double dual_objective(const DualPotential& v, const OccupancyTable& ref_dist, const TabularMdp& mdp, double eta);
std::vector<double> dual_gradient(const DualPotential& v, const OccupancyTable& ref_dist, const TabularMdp& mdp,
                                  double eta);

/// Minimizes the dual from v = 0. Non-convergence is reported through
/// SolveReport::converged, not an exception.
SolveReport solve_dual(const OccupancyTable& ref_dist, const TabularMdp& mdp, double eta,
                       const SolverOptions& options = {});

/// d~(s,a) proportional to ref(s,a) exp(eta R + gamma T v - v(s)), normalized.
OccupancyTable extract_occupancy(const DualPotential& v_star, const OccupancyTable& ref_dist, const TabularMdp& mdp,
                                 double eta);

/// Row-normalizes over actions; states with mass below 1e-12 get the uniform row.
Policy extract_policy(const OccupancyTable& d_tilde);

} // namespace passive_rl
