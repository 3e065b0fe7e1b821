#include "passive_rl/occupancy.hpp"

#include "passive_rl/csv.hpp"
#include "passive_rl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace passive_rl {

OccupancyTable::OccupancyTable(int n_states, int n_actions, std::vector<double> values, bool normalized)
    : n_states_(n_states), n_actions_(n_actions), values_(std::move(values)), normalized_(normalized) {
    if (n_states_ <= 0 || n_actions_ <= 0) throw ValidationError("occupancy dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(n_states_) * n_actions_)
        throw ValidationError("occupancy table has the wrong size");
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0) throw ValidationError("occupancy entries must be finite and nonnegative");
    if (normalized_ && std::abs(total() - 1.0) > 1e-10) throw ValidationError("normalized occupancy does not sum to 1");
}

OccupancyTable OccupancyTable::uniform(int n_states, int n_actions) {
    const auto cells = static_cast<std::size_t>(n_states) * n_actions;
    return {n_states, n_actions, std::vector<double>(cells, 1.0 / static_cast<double>(cells))};
}

double OccupancyTable::total() const noexcept {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

std::vector<double> OccupancyTable::state_marginal() const {
    std::vector<double> m(n_states_, 0.0);
    for (int s = 0; s < n_states_; ++s)
        for (int a = 0; a < n_actions_; ++a) m[s] += at(s, a);
    return m;
}

OccupancyTable OccupancyTable::normalized_copy() const {
    const double sum = total();
    if (!(sum > 0.0)) throw ValidationError("cannot normalize an all-zero occupancy");
    std::vector<double> v(values_);
    for (double& x : v) x /= sum;
    return {n_states_, n_actions_, std::move(v)};
}

OccupancyTable OccupancyTable::mixed_with_uniform(double weight) const {
    if (!(weight >= 0.0 && weight <= 1.0)) throw ValidationError("smoothing weight must lie in [0,1]");
    const double sum = total();
    const double u = 1.0 / static_cast<double>(values_.size());
    std::vector<double> v(values_.size());
    if (weight == 1.0 || !(sum > 0.0)) {
        std::fill(v.begin(), v.end(), u);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - weight) * values_[i] / sum + weight * u;
        double mixed = 0.0;
        for (double x : v) mixed += x;
        for (double& x : v) x /= mixed;
    }
    return {n_states_, n_actions_, std::move(v)};
}

void OccupancyTable::save_csv(const std::filesystem::path& path) const {
    CsvWriter csv({"s", "a", "d"});
    for (int s = 0; s < n_states_; ++s)
        for (int a = 0; a < n_actions_; ++a)
            csv.row({std::to_string(s), std::to_string(a), format_double(at(s, a))});
    csv.save(path);
}

OccupancyTable OccupancyTable::load_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.header != std::vector<std::string>{"s", "a", "d"})
        throw ParseError(1, "occupancy CSV header must be 's,a,d'");
    std::map<std::pair<int, int>, double> cells;
    int max_s = -1;
    int max_a = -1;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        try {
            const int s = std::stoi(r[0]);
            const int a = std::stoi(r[1]);
            const double d = std::stod(r[2]);
            if (s < 0 || a < 0) throw std::out_of_range("negative index");
            if (!cells.emplace(std::pair{s, a}, d).second) throw ParseError(i + 2, "duplicate cell");
            max_s = std::max(max_s, s);
            max_a = std::max(max_a, a);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(i + 2, "malformed occupancy row");
        }
    }
    if (max_s < 0) throw ParseError(2, "occupancy CSV has no rows");
    const int n_states = max_s + 1;
    const int n_actions = max_a + 1;
    if (cells.size() != static_cast<std::size_t>(n_states) * n_actions)
        throw ValidationError("occupancy CSV does not cover every (s,a) cell");
    std::vector<double> v;
    v.reserve(cells.size());
    for (const auto& [key, d] : cells) v.push_back(d);
    OccupancyTable raw(n_states, n_actions, std::move(v), false);
    return raw.normalized_copy();
}

double max_abs_difference(const OccupancyTable& a, const OccupancyTable& b) {
    if (!a.same_shape(b)) throw ValidationError("occupancy shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace passive_rl
