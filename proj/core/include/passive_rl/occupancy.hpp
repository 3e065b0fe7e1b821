#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace passive_rl {

/// Discounted state-action measure on a finite (s, a) table. When `normalized` is set
/// the entries sum to one.
class OccupancyTable {
public:
    OccupancyTable(int n_states, int n_actions, std::vector<double> values, bool normalized = true);

    static OccupancyTable uniform(int n_states, int n_actions);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    int n_cells() const noexcept { return n_states_ * n_actions_; }
    bool normalized() const noexcept { return normalized_; }

    double at(int s, int a) const noexcept { return values_[static_cast<std::size_t>(s) * n_actions_ + a]; }
    std::span<const double> values() const noexcept { return values_; }

    double total() const noexcept;
    std::vector<double> state_marginal() const;
    bool same_shape(const OccupancyTable& other) const noexcept {
        return n_states_ == other.n_states_ && n_actions_ == other.n_actions_;
    }

    /// Scales entries to sum to one.
    OccupancyTable normalized_copy() const;
    /// (1 - weight) * this + weight * uniform, renormalized.
    OccupancyTable mixed_with_uniform(double weight) const;

    /// CSV with header `s,a,d`, full double precision.
    void save_csv(const std::filesystem::path& path) const;
    static OccupancyTable load_csv(const std::filesystem::path& path);

private:
    int n_states_;
    int n_actions_;
    std::vector<double> values_;
    bool normalized_;
};

/// Largest absolute difference between two same-shape tables.
double max_abs_difference(const OccupancyTable& a, const OccupancyTable& b);

} // namespace passive_rl
