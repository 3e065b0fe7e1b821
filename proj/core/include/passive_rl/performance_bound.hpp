#pragma once

#include "passive_rl/dual_solver.hpp"
#include "passive_rl/mdp.hpp"
#include "passive_rl/occupancy.hpp"

namespace passive_rl {

/// Suboptimality of the regularized solution against its worst-case guarantee.
struct PerfBoundReport {
    /// max over supp(d*) of d*(s,a) / d^D(s,a).
    double ratio_sup = 0.0;
    /// 1 / min_s |mu0(s) / d^D(s)|, d^D(s) the state marginal of the memory.
    double c = 0.0;
    /// sqrt(log(ratio_sup) (1-gamma) c |S| |A|), natural log.
    double bound = 0.0;
    /// V*(mu0) - V^{pi~}(mu0) with pi~ from the eta = 1 regularized solve on d_mem.
    double actual_gap = 0.0;
};

/// Throws SupportError when d_mem misses part of d_star's support and
/// std::domain_error when a state marginal of d_mem is zero.
PerfBoundReport performance_bound(const TabularMdp& mdp, const OccupancyTable& d_star, const OccupancyTable& d_mem,
                                  const SolverOptions& solver = {.tol = 1e-10, .method = DescentMethod::newton});

} // namespace passive_rl
