#include "passive_rl/density.hpp"

#include "passive_rl/csv.hpp"
#include "passive_rl/errors.hpp"
#include "passive_rl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace passive_rl {

namespace {

void check_common(double gamma, int horizon, std::size_t n) {
    if (n == 0) throw ValidationError("episode list is empty");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
}

template <class State>
void check_length(const BasicEpisode<State>& e, int horizon, std::size_t i) {
    if (e.steps.size() != static_cast<std::size_t>(horizon) + 1)
        throw ValidationError("episode " + std::to_string(i) + " has " + std::to_string(e.steps.size()) +
                              " steps, expected " + std::to_string(horizon + 1));
}

double truncated_normalizer(double gamma, int horizon, std::size_t n) {
    return (1.0 - gamma) / (static_cast<double>(n) * (1.0 - std::pow(gamma, horizon + 1)));
}

} // namespace

OccupancyTable plugin_estimate(std::span<const Episode> episodes, int n_states, int n_actions, double gamma,
                               int horizon) {
    check_common(gamma, horizon, episodes.size());
    std::vector<double> counts(static_cast<std::size_t>(n_states) * n_actions, 0.0);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        check_length(episodes[i], horizon, i);
        double w = 1.0;
        for (const auto& step : episodes[i].steps) {
            if (step.state < 0 || step.state >= n_states || step.action < 0 || step.action >= n_actions)
                throw ValidationError("episode " + std::to_string(i) + " visits a cell outside the table");
            counts[static_cast<std::size_t>(step.state) * n_actions + step.action] += w;
            w *= gamma;
        }
    }
    const double scale = truncated_normalizer(gamma, horizon, episodes.size());
    for (double& c : counts) c *= scale;
    // absorb rounding so the table sums to one
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (double& c : counts) c /= total;
    return {n_states, n_actions, std::move(counts)};
}

double plugin_error_bound(long long n, int cells, double delta) {
    if (n < 1) throw ValidationError("episode count must be at least 1");
    if (cells < 1) throw ValidationError("cell count must be at least 1");
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
    const double l = std::log(2.0 * cells / delta);
    return (l / 3.0 + std::sqrt(l * l / 9.0 + 8.0 * l)) / (2.0 * static_cast<double>(n));
}

std::size_t KdeModel::n_samples() const noexcept {
    std::size_t total = 0;
    for (const auto& w : weights_) total += w.size();
    return total;
}

double KdeModel::evaluate(std::span<const double> state, int action) const {
    if (static_cast<int>(state.size()) != dim()) throw ValidationError("state has the wrong dimension");
    if (action < 0 || action >= n_actions_) throw ValidationError("action out of range");
    const int d = dim();
    const double b = bandwidth();
    const auto& pts = points_[action];
    const auto& w = weights_[action];
    const std::size_t count = w.size();
    // first index whose first coordinate reaches state[0] - b
    std::size_t lo = 0;
    std::size_t hi = count;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (pts[mid * d] < state[0] - b) lo = mid + 1;
        else hi = mid;
    }
    std::vector<double> u(d);
    double sum = 0.0;
    for (std::size_t i = lo; i < count && pts[i * d] <= state[0] + b; ++i) {
        for (int j = 0; j < d; ++j) u[j] = (state[j] - pts[i * d + j]) / b;
        sum += w[i] * kernel_.eval(u);
    }
    return std::max(0.0, normalizer_ * sum / std::pow(b, d));
}

std::vector<double> KdeModel::grid_values(int action, int points_per_dim) const {
    if (action < 0 || action >= n_actions_) throw ValidationError("action out of range");
    if (points_per_dim < 2) throw ValidationError("grid needs at least 2 points per axis");
    const int d = dim();
    const double b = bandwidth();
    const int m = points_per_dim;
    std::vector<double> step(d);
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        step[j] = (upper_[j] - lower_[j]) / (m - 1);
        total *= static_cast<std::size_t>(m);
    }
    std::vector<double> values(total, 0.0);
    const auto& pts = points_[action];
    const auto& w = weights_[action];
    std::vector<int> first(d), last(d), index(d);
    std::vector<double> u(d);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double* p = pts.data() + i * d;
        bool empty = false;
        for (int j = 0; j < d; ++j) {
            first[j] = std::max(0, static_cast<int>(std::ceil((p[j] - b - lower_[j]) / step[j])));
            last[j] = std::min(m - 1, static_cast<int>(std::floor((p[j] + b - lower_[j]) / step[j])));
            if (first[j] > last[j]) empty = true;
        }
        if (empty) continue;
        index = first;
        for (;;) {
            std::size_t flat = 0;
            for (int j = 0; j < d; ++j) {
                u[j] = (lower_[j] + index[j] * step[j] - p[j]) / b;
                flat = flat * m + static_cast<std::size_t>(index[j]);
            }
            values[flat] += w[i] * kernel_.eval(u);
            int j = d - 1;
            for (; j >= 0; --j) {
                if (++index[j] <= last[j]) break;
                index[j] = first[j];
            }
            if (j < 0) break;
        }
    }
    const double scale = normalizer_ / std::pow(b, d);
    for (double& v : values) v = std::max(0.0, v * scale);
    return values;
}

double KdeModel::integrate(int k) const {
    const int m = (1 << k) + 1;
    double total = 0.0;
    for (int a = 0; a < n_actions_; ++a) total += simpson_tensor(grid_values(a, m), lower_, upper_, m);
    return total;
}

void KdeModel::save_grid_csv(const std::filesystem::path& path, int points_per_dim) const {
    const int d = dim();
    std::vector<std::string> header;
    for (int j = 0; j < d; ++j) header.push_back("x" + std::to_string(j + 1));
    header.emplace_back("action");
    header.emplace_back("density");
    CsvWriter out(header);
    const int m = points_per_dim;
    for (int a = 0; a < n_actions_; ++a) {
        const auto values = grid_values(a, m);
        std::vector<int> index(d, 0);
        for (double v : values) {
            std::vector<std::string> row;
            for (int j = 0; j < d; ++j)
                row.push_back(format_double(lower_[j] + index[j] * (upper_[j] - lower_[j]) / (m - 1)));
            row.push_back(std::to_string(a));
            row.push_back(format_double(v));
            out.row(row);
            for (int j = d - 1; j >= 0; --j) {
                if (++index[j] < m) break;
                index[j] = 0;
            }
        }
    }
    out.save(path);
}

KdeModel kde_estimate(std::span<const ContinuousEpisode> episodes, int n_actions, const KernelSpec& kernel,
                      double gamma, int horizon, std::span<const double> lower, std::span<const double> upper) {
    if (!(kernel.bandwidth > 0.0) || !std::isfinite(kernel.bandwidth))
        throw ValidationError("bandwidth must be positive");
    check_common(gamma, horizon, episodes.size());
    if (n_actions < 1) throw ValidationError("action count must be at least 1");
    const int d = kernel.dim;
    if (static_cast<int>(lower.size()) != d || static_cast<int>(upper.size()) != d)
        throw ValidationError("kernel dimension does not match the state box");

    KdeModel model;
    model.kernel_ = kernel;
    model.n_actions_ = n_actions;
    model.lower_.assign(lower.begin(), lower.end());
    model.upper_.assign(upper.begin(), upper.end());
    model.n_episodes_ = static_cast<long long>(episodes.size());
    model.normalizer_ = truncated_normalizer(gamma, horizon, episodes.size());

    struct Sample {
        const double* x;
        double w;
    };
    std::vector<std::vector<Sample>> buckets(n_actions);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        check_length(episodes[i], horizon, i);
        double w = 1.0;
        for (const auto& step : episodes[i].steps) {
            if (static_cast<int>(step.state.size()) != d) throw ValidationError("state has the wrong dimension");
            if (step.action < 0 || step.action >= n_actions) throw ValidationError("action out of range");
            buckets[step.action].push_back({step.state.data(), w});
            for (int j = 0; j < d; ++j) {
                if (step.state[j] - kernel.bandwidth < lower[j] || step.state[j] + kernel.bandwidth > upper[j])
                    model.boundary_leak_ = true;
            }
            w *= gamma;
        }
    }
    model.points_.resize(n_actions);
    model.weights_.resize(n_actions);
    for (int a = 0; a < n_actions; ++a) {
        auto& bucket = buckets[a];
        std::stable_sort(bucket.begin(), bucket.end(), [](const Sample& l, const Sample& r) { return l.x[0] < r.x[0]; });
        model.points_[a].reserve(bucket.size() * d);
        model.weights_[a].reserve(bucket.size());
        for (const auto& sample : bucket) {
            model.points_[a].insert(model.points_[a].end(), sample.x, sample.x + d);
            model.weights_[a].push_back(sample.w);
        }
    }
    return model;
}

double kde_bias_bound(const KernelSpec& kernel) {
    return kernel.holder_const * kernel.c_k * std::pow(kernel.bandwidth, kernel.beta);
}

double kde_l1_bound(const KernelSpec& kernel, double state_measure, double action_measure, long long n, double delta) {
    if (n < 1) throw ValidationError("episode count must be at least 1");
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
    const double b = kernel.bandwidth;
    const double variance_term =
        std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n) * std::pow(b, 2 * kernel.dim)));
    return kde_bias_bound(kernel) * state_measure * action_measure + variance_term;
}

double grid_l1_distance(const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& g,
                        std::span<const double> lower, std::span<const double> upper, int points_per_dim) {
    if (f.size() != g.size()) throw ValidationError("estimates have different action counts");
    double total = 0.0;
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (f[a].size() != g[a].size()) throw ValidationError("estimates use different grids");
        std::vector<double> diff(f[a].size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(f[a][i] - g[a][i]);
        total += simpson_tensor(diff, lower, upper, points_per_dim);
    }
    return total;
}

} // namespace passive_rl
