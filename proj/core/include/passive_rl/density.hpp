#pragma once

#include "passive_rl/kernel.hpp"
#include "passive_rl/mdp.hpp"
#include "passive_rl/occupancy.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace passive_rl {

/// Discounted visit frequencies over h = 0..H, scaled by (1-gamma) / (n (1-gamma^(H+1)))
/// so the table sums to one. Every episode must hold H + 1 steps.
OccupancyTable plugin_estimate(std::span<const Episode> episodes, int n_states, int n_actions, double gamma,
                               int horizon);

/// (log(db)/3 + sqrt(log(db)^2/9 + 8 log(db))) / (2n) with db = 2 cells / delta.
double plugin_error_bound(long long n, int cells, double delta);

/// Kernel occupancy estimate over a state box with finite actions: one product-kernel
/// estimate over the state coordinates per action.
class KdeModel {
public:
    const KernelSpec& kernel() const noexcept { return kernel_; }
    int dim() const noexcept { return kernel_.dim; }
    int n_actions() const noexcept { return n_actions_; }
    double bandwidth() const noexcept { return kernel_.bandwidth; }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    long long n_episodes() const noexcept { return n_episodes_; }
    std::size_t n_samples() const noexcept;
    /// (1-gamma) / (n (1-gamma^(H+1))).
    double normalizer() const noexcept { return normalizer_; }
    /// True when some sample lies within one bandwidth of the box edge, so part of its
    /// kernel mass falls outside the box.
    bool boundary_leak() const noexcept { return boundary_leak_; }

    double evaluate(std::span<const double> state, int action) const;

    /// Density of `action` on the grid lower + i (upper - lower) / (m - 1), i = 0..m-1
    /// per axis, last axis fastest.
    std::vector<double> grid_values(int action, int points_per_dim) const;

    /// Mass inside the box summed over actions, tensor Simpson on 2^k + 1 nodes per axis.
    double integrate(int k = 10) const;

    /// CSV `x1,...,xd,action,density` on the grid of grid_values.
    void save_grid_csv(const std::filesystem::path& path, int points_per_dim) const;

private:
    friend KdeModel kde_estimate(std::span<const ContinuousEpisode>, int, const KernelSpec&, double, int,
                                 std::span<const double>, std::span<const double>);
    KdeModel() = default;

    KernelSpec kernel_;
    int n_actions_ = 0;
    std::vector<double> lower_;
    std::vector<double> upper_;
    long long n_episodes_ = 0;
    double normalizer_ = 0.0;
    bool boundary_leak_ = false;
    // per action: points (dim coordinates each) sorted by the first coordinate, and weights gamma^h
    std::vector<std::vector<double>> points_;
    std::vector<std::vector<double>> weights_;
};

/// Throws ValidationError when the bandwidth is not positive, the kernel dimension does
/// not match the states, or an episode does not hold H + 1 steps.
KdeModel kde_estimate(std::span<const ContinuousEpisode> episodes, int n_actions, const KernelSpec& kernel,
                      double gamma, int horizon, std::span<const double> lower, std::span<const double> upper);

/// L C_K b^beta.
double kde_bias_bound(const KernelSpec& kernel);

/// L C_K b^beta S A + sqrt(ln(1/delta) / (2 n b^(2d))).
double kde_l1_bound(const KernelSpec& kernel, double state_measure, double action_measure, long long n,
                    double delta);

/// Sum over actions of the integral of |f_a - g_a| for two estimates tabulated by
/// grid_values on the same grid.
double grid_l1_distance(const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& g,
                        std::span<const double> lower, std::span<const double> upper, int points_per_dim);

} // namespace passive_rl
