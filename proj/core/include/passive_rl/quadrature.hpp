#pragma once

#include <functional>
#include <span>
#include <vector>

namespace passive_rl {

/// Composite Simpson rule on 2^k + 1 equally spaced nodes of [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int k);

struct QuadratureResult {
    double value = 0.0;
    /// Grid exponent at which two consecutive refinements agreed.
    int k = 0;
    bool converged = false;
};

/// Doubles the Simpson grid from 2^k_min + 1 nodes until successive values differ by
/// less than `tol`, or k reaches k_max.
QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-9,
                                  int k_min = 4, int k_max = 22);

/// Simpson weights for m (odd, >= 3) equally spaced nodes with spacing h.
std::vector<double> simpson_weights(int m, double h);

/// Tensor-product Simpson integral of values sampled on a (points_per_dim)^dim grid
/// over the box [lower, upper], stored with the last axis varying fastest.
double simpson_tensor(std::span<const double> values, std::span<const double> lower, std::span<const double> upper,
                      int points_per_dim);

} // namespace passive_rl
