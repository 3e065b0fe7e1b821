// Literal examples whose stated outcome contradicts the math. Each test is
// registered with WILL_FAIL, so ctest turns red if one of them starts passing.
#include "passive_rl/adversarial.hpp"
#include "passive_rl/exact.hpp"
#include "passive_rl/instances.hpp"
#include "passive_rl/performance_bound.hpp"

#include <gtest/gtest.h>

using namespace passive_rl;

// bound is in normalized-occupancy units, actual_gap in value units (factor 1/(1-gamma) apart)
TEST(KnownFailure, UniformMemoryBoundCoversValueGap) {
    const auto mdp = instances::benchmark_2x2();
    const auto d_star = exact_occupancy(mdp, optimal_policy(mdp).policy);
    const auto report = performance_bound(mdp, d_star, OccupancyTable::uniform(2, 2));
    EXPECT_GE(report.bound, report.actual_gap);
}

// optimal_delta with the same c sets the square-root factor to exactly 1
TEST(KnownFailure, OptimalDeltaGivesPositiveLowerBound) {
    const double delta = optimal_delta(2, 2, 0.9, 8.0, 10, 20);
    EXPECT_GT(pair_lower_bound(2, 2, 0.9, delta, 8.0, 10, 20), 0.0);
}
