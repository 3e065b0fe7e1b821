#include "passive_rl/quadrature.hpp"

#include "passive_rl/errors.hpp"

#include <cmath>

namespace passive_rl {

double simpson(const std::function<double(double)>& f, double a, double b, int k) {
    if (k < 1) throw ValidationError("Simpson grid exponent must be at least 1");
    const long long intervals = 1LL << k;
    const double h = (b - a) / static_cast<double>(intervals);
    double odd = 0.0;
    double even = 0.0;
    for (long long i = 1; i < intervals; ++i) {
        const double x = a + h * static_cast<double>(i);
        (i % 2 == 1 ? odd : even) += f(x);
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b, double tol, int k_min,
                                  int k_max) {
    QuadratureResult result;
    double previous = simpson(f, a, b, k_min);
    for (int k = k_min + 1; k <= k_max; ++k) {
        const double current = simpson(f, a, b, k);
        result.value = current;
        result.k = k;
        if (std::abs(current - previous) < tol) {
            result.converged = true;
            return result;
        }
        previous = current;
    }
    return result;
}

std::vector<double> simpson_weights(int m, double h) {
    if (m < 3 || m % 2 == 0) throw ValidationError("Simpson grids need an odd node count of at least 3");
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) w[i] = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (double& x : w) x *= h / 3.0;
    return w;
}

double simpson_tensor(std::span<const double> values, std::span<const double> lower, std::span<const double> upper,
                      int points_per_dim) {
    const int dim = static_cast<int>(lower.size());
    if (dim == 0 || upper.size() != lower.size()) throw ValidationError("box bounds are inconsistent");
    std::vector<std::vector<double>> weights;
    std::size_t expected = 1;
    for (int i = 0; i < dim; ++i) {
        weights.push_back(simpson_weights(points_per_dim, (upper[i] - lower[i]) / (points_per_dim - 1)));
        expected *= static_cast<std::size_t>(points_per_dim);
    }
    if (values.size() != expected) throw ValidationError("grid value count does not match the grid");

    std::vector<int> index(dim, 0);
    double total = 0.0;
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        double w = 1.0;
        for (int i = 0; i < dim; ++i) w *= weights[i][index[i]];
        total += w * values[flat];
        for (int i = dim - 1; i >= 0; --i) {
            if (++index[i] < points_per_dim) break;
            index[i] = 0;
        }
    }
    return total;
}

} // namespace passive_rl
