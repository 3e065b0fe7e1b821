#include "passive_rl/kernel.hpp"

#include "passive_rl/errors.hpp"
#include "passive_rl/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace passive_rl {

namespace {

constexpr double kMomentTol = 1e-8;

double moment(const std::function<double(double)>& g, int order, bool absolute) {
    auto integrand = [&](double t) {
        const double v = g(t);
        return std::pow(absolute ? std::abs(t) : t, order) * (absolute ? std::abs(v) : v);
    };
    return simpson_adaptive(integrand, -1.0, 1.0, 1e-13).value;
}

// Integral of |t|^beta |K(t)| over [-1,1]^dim for the product kernel.
double kernel_constant(const std::function<double(double)>& g, int beta, int dim) {
    if (dim == 1) return moment(g, beta, true);
    if (beta % 2 == 0) {
        // |t|^beta = (sum t_i^2)^(beta/2); expand multinomially into separable terms.
        const int m = beta / 2;
        std::vector<double> abs_moments(m + 1);
        for (int j = 0; j <= m; ++j) abs_moments[j] = moment(g, 2 * j, true);
        double total = 0.0;
        std::vector<int> parts(dim, 0);
        // enumerate compositions of m into dim parts
        const auto recurse = [&](auto&& self, int axis, int remaining) -> void {
            if (axis == dim - 1) {
                parts[axis] = remaining;
                double coeff = std::tgamma(m + 1.0);
                double term = 1.0;
                for (int i = 0; i < dim; ++i) {
                    coeff /= std::tgamma(parts[i] + 1.0);
                    term *= abs_moments[parts[i]];
                }
                total += coeff * term;
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                parts[axis] = k;
                self(self, axis + 1, remaining - k);
            }
        };
        recurse(recurse, 0, m);
        return total;
    }
    if (dim == 2) {
        auto inner = [&](double x) {
            return simpson_adaptive(
                       [&](double y) {
                           return std::pow(std::hypot(x, y), beta) * std::abs(g(x) * g(y));
                       },
                       -1.0, 1.0, 1e-10, 4, 12)
                .value;
        };
        return simpson_adaptive(inner, -1.0, 1.0, 1e-9, 4, 12).value;
    }
    throw ValidationError("C_K for odd beta is only computed for dim <= 2");
}

} // namespace

double KernelSpec::eval(std::span<const double> u) const {
    double k = 1.0;
    for (double x : u) {
        if (x < -1.0 || x > 1.0) return 0.0;
        k *= g(x);
    }
    return k;
}

KernelSpec kernel_validate(std::function<double(double)> g, int beta, int dim, double bandwidth, double holder_const,
                           std::string name) {
    if (!g) throw ValidationError("kernel function is empty");
    if (beta < 1) throw ValidationError("kernel order beta must be at least 1");
    if (dim < 1) throw ValidationError("kernel dimension must be at least 1");
    const double mass = moment(g, 0, false);
    if (std::abs(mass - 1.0) > kMomentTol) {
        std::ostringstream os;
        os << "∫G ≠ 1 (integral is " << mass << ")";
        throw ValidationError(os.str());
    }
    for (int s = 1; s <= beta - 1; ++s) {
        const double m = moment(g, s, false);
        if (std::abs(m) > kMomentTol) {
            std::ostringstream os;
            os << "moment order s=" << s << " does not vanish (value " << m << ")";
            throw ValidationError(os.str());
        }
    }
    KernelSpec spec;
    spec.g = std::move(g);
    spec.beta = beta;
    spec.bandwidth = bandwidth;
    spec.dim = dim;
    spec.holder_const = holder_const;
    spec.name = std::move(name);
    spec.c_k = kernel_constant(spec.g, beta, dim);
    return spec;
}

std::function<double(double)> named_kernel(const std::string& name) {
    if (name == "epanechnikov") return [](double x) { return 0.75 * (1.0 - x * x); };
    if (name == "biweight") return [](double x) { return 15.0 / 16.0 * (1.0 - x * x) * (1.0 - x * x); };
    if (name == "box") return [](double) { return 0.5; };
    if (name == "box2") return [](double) { return 1.0; };
    if (name == "quartic4") return [](double x) { return 15.0 / 32.0 * (3.0 - 10.0 * x * x + 7.0 * x * x * x * x); };
    throw ValidationError("unknown kernel '" + name + "'");
}

} // namespace passive_rl
