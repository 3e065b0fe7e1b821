#include "passive_rl/performance_bound.hpp"

#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace passive_rl {

PerfBoundReport performance_bound(const TabularMdp& mdp, const OccupancyTable& d_star, const OccupancyTable& d_mem,
                                  const SolverOptions& solver) {
    if (!d_star.same_shape(d_mem) || d_star.n_states() != mdp.n_states() || d_star.n_actions() != mdp.n_actions())
        throw ValidationError("occupancy shapes do not match the MDP");

    PerfBoundReport report;
    report.ratio_sup = 0.0;
    for (int s = 0; s < d_star.n_states(); ++s) {
        for (int a = 0; a < d_star.n_actions(); ++a) {
            const double p = d_star.at(s, a);
            if (p <= 0.0) continue;
            const double q = d_mem.at(s, a);
            if (q <= 0.0) {
                std::ostringstream os;
                os << "support violation at (s=" << s << ",a=" << a << "): memory has no mass";
                throw SupportError(os.str());
            }
            report.ratio_sup = std::max(report.ratio_sup, p / q);
        }
    }

    const auto marginal = d_mem.state_marginal();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < mdp.n_states(); ++s) {
        if (marginal[s] <= 0.0) throw std::domain_error("memory state marginal is zero at s=" + std::to_string(s));
        min_ratio = std::min(min_ratio, std::abs(mdp.mu0()[s] / marginal[s]));
    }
    report.c = 1.0 / min_ratio;

    const double log_ratio = std::log(report.ratio_sup);
    const double scale = (1.0 - mdp.gamma()) * report.c * mdp.n_states() * mdp.n_actions();
    // log_ratio = 0 means the memory already is d*; the bound is 0 even if c is infinite.
    report.bound = log_ratio <= 0.0 ? 0.0 : std::sqrt(log_ratio * scale);

    const auto solved = solve_dual(d_mem, mdp, 1.0, solver);
    if (!solved.converged) throw NumericalError("regularized solve did not converge");
    const auto policy = extract_policy(extract_occupancy(solved.v_star, d_mem, mdp, 1.0));
    const double v_star = optimal_policy(mdp, 1e-12).value;
    report.actual_gap = std::max(0.0, v_star - exact_value(mdp, policy));
    return report;
}

} // namespace passive_rl
