#pragma once

#include "passive_rl/mdp.hpp"
#include "passive_rl/occupancy.hpp"

#include <vector>

namespace passive_rl {

/// Normalized discounted occupancy of `policy` from mu0, by a dense linear solve of
/// (I - gamma P_pi^T) rho = (1 - gamma) mu0 followed by d(s,a) = rho(s) pi(a|s).
/// Throws NumericalError if the flow residual exceeds 1e-10.
OccupancyTable exact_occupancy(const TabularMdp& mdp, const Policy& policy);

/// max_s |sum_a d(s,a) - (1-gamma) mu0(s) - gamma (T_* d)(s)|.
double flow_residual(const TabularMdp& mdp, const OccupancyTable& d);

/// Expected discounted visits sum_{h=0}^{H} gamma^h P(s_h=s, a_h=a), unnormalized:
/// the table sums to (1 - gamma^(H+1)) / (1 - gamma).
OccupancyTable discounted_visits(const TabularMdp& mdp, const Policy& policy, int horizon);

/// Truncated occupancy d^H: discounted_visits scaled by (1-gamma)/(1-gamma^(H+1)),
/// i.e. the mean of the plug-in estimator.
OccupancyTable exact_truncated_occupancy(const TabularMdp& mdp, const Policy& policy, int horizon);

/// Expected mean reward under an occupancy, E_d[R].
double expected_reward(const TabularMdp& mdp, const OccupancyTable& d);

/// V^pi(mu0) = E_d[R] / (1 - gamma).
double exact_value(const TabularMdp& mdp, const Policy& policy);

struct OptimalSolution {
    Policy policy;
    /// V*(mu0).
    double value;
    std::vector<double> state_values;
    int iterations;
};

/// Value iteration until the span of successive differences is small enough that the
/// greedy policy is within `tol` of optimal; ties go to the lowest action index.
/// The reported value is the exact value of the returned greedy policy.
OptimalSolution optimal_policy(const TabularMdp& mdp, double tol = 1e-10);

/// D(d1 || d2) in nats with 0 log 0 = 0. Throws SupportError when d1 > 0 where d2 = 0.
double kl_divergence(const OccupancyTable& d1, const OccupancyTable& d2);

} // namespace passive_rl
