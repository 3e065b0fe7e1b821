#pragma once

#include <cstddef>
#include <functional>

namespace passive_rl {

/// Worker count: hardware concurrency capped by PASSIVE_RL_THREADS when set.
int worker_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = worker_threads()).
/// Each index runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

} // namespace passive_rl
