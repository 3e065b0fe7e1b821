#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace passive_rl {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of stream `index` under master seed `master`. Streams are independent of
/// evaluation order, so work split across threads reproduces the sequential result.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) built from the top 53 bits. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Index drawn from a discrete distribution by inversion. Falls back to the last
/// index with positive mass when rounding leaves the cumulative sum short of `u`.
inline int sample_categorical(std::span<const double> probs, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = static_cast<int>(i);
        if (u < acc) return static_cast<int>(i);
    }
    return last_positive;
}

} // namespace passive_rl
