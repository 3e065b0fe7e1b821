#include "passive_rl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace passive_rl {

int worker_threads() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("PASSIVE_RL_THREADS")) {
        try {
            const int limit = std::stoi(cap);
            if (limit >= 1) n = std::min(n, limit);
        } catch (const std::exception&) {
            // unparsable cap: keep the hardware default
        }
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads) {
    if (threads <= 0) threads = worker_threads();
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace passive_rl
