#pragma once

#include <functional>
#include <span>
#include <string>

namespace passive_rl {

/// Product kernel K(u) = G(u_1) ... G(u_d) with G supported on [-1, 1], plus the
/// smoothness data used by the bias bounds.
struct KernelSpec {
    std::function<double(double)> g;
    int beta = 2;
    double bandwidth = 0.1;
    int dim = 1;
    /// Integral of |t|^beta |K(t)| over R^d, Euclidean |t|.
    double c_k = 0.0;
    /// Hoelder constant L of the target density class.
    double holder_const = 1.0;
    std::string name;

    /// G evaluated with the support cut at [-1, 1].
    double g_at(double x) const { return (x < -1.0 || x > 1.0) ? 0.0 : g(x); }
    /// K(u) for a point u in R^dim.
    double eval(std::span<const double> u) const;
};

/// Checks that G integrates to one and that its moments of order 1..beta-1 vanish,
/// then computes C_K by quadrature. Throws ValidationError otherwise; the message
/// names the failing moment order.
KernelSpec kernel_validate(std::function<double(double)> g, int beta, int dim, double bandwidth = 0.1,
                           double holder_const = 1.0, std::string name = "custom");

/// Built-in G functions: "epanechnikov" 0.75(1-x^2), "biweight" (15/16)(1-x^2)^2,
/// "box" 1/2, "box2" 1 (integrates to 2, so it fails validation), "quartic4" the
/// fourth-order kernel (15/32)(3 - 10x^2 + 7x^4).
std::function<double(double)> named_kernel(const std::string& name);

} // namespace passive_rl
