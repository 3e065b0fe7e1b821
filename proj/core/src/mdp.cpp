#include "passive_rl/mdp.hpp"

#include "passive_rl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace passive_rl {

namespace {

constexpr double kSumTolerance = 1e-12;

std::string cell_name(int s, int a) {
    std::ostringstream os;
    os << "(s=" << s << ",a=" << a << ")";
    return os.str();
}

void check_distribution(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) throw ValidationError(what + " has a negative or non-finite entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os << what << " sums to " << sum;
        throw ValidationError(os.str());
    }
}

} // namespace

TabularMdp::TabularMdp(int n_states, int n_actions, std::vector<double> transition,
                       std::vector<RewardLaw> rewards, double gamma, std::vector<double> mu0)
    : n_states_(n_states), n_actions_(n_actions), transition_(std::move(transition)),
      rewards_(std::move(rewards)), gamma_(gamma), mu0_(std::move(mu0)) {
    if (n_states_ <= 0 || n_actions_ <= 0) throw ValidationError("state and action counts must be positive");
    if (!(gamma_ > 0.0 && gamma_ < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    const auto cells = static_cast<std::size_t>(n_states_) * n_actions_;
    if (transition_.size() != cells * n_states_) throw ValidationError("transition table has the wrong size");
    if (rewards_.size() != cells) throw ValidationError("reward table has the wrong size");
    if (mu0_.size() != static_cast<std::size_t>(n_states_)) throw ValidationError("mu0 has the wrong size");

    for (int s = 0; s < n_states_; ++s)
        for (int a = 0; a < n_actions_; ++a)
            check_distribution(transition_row(s, a), "row " + cell_name(s, a));
    check_distribution(mu0_, "mu0");
    for (int s = 0; s < n_states_; ++s) {
        for (int a = 0; a < n_actions_; ++a) {
            const double p = reward(s, a).param;
            if (!(p >= 0.0 && p <= 1.0))
                throw ValidationError("reward parameter out of [0,1] at " + cell_name(s, a));
        }
    }
}

TabularMdp TabularMdp::with_initial(std::vector<double> mu0) const {
    return {n_states_, n_actions_, transition_, rewards_, gamma_, std::move(mu0)};
}

TabularMdp TabularMdp::with_rewards(std::vector<RewardLaw> rewards) const {
    return {n_states_, n_actions_, transition_, std::move(rewards), gamma_, mu0_};
}

Policy::Policy(int n_states, int n_actions, std::vector<double> probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)) {
    if (n_states_ <= 0 || n_actions_ <= 0) throw ValidationError("policy dimensions must be positive");
    if (probs_.size() != static_cast<std::size_t>(n_states_) * n_actions_)
        throw ValidationError("policy table has the wrong size");
    for (int s = 0; s < n_states_; ++s) check_distribution(row(s), "policy row s=" + std::to_string(s));
}

Policy Policy::uniform(int n_states, int n_actions) {
    return {n_states, n_actions,
            std::vector<double>(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions)};
}

Policy Policy::deterministic(std::span<const int> actions, int n_actions) {
    std::vector<double> probs(actions.size() * n_actions, 0.0);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] < 0 || actions[s] >= n_actions) throw ValidationError("action index out of range");
        probs[s * n_actions + actions[s]] = 1.0;
    }
    return {static_cast<int>(actions.size()), n_actions, std::move(probs)};
}

Policy Policy::mixture(const Policy& first, const Policy& second, double alpha) {
    if (first.n_states_ != second.n_states_ || first.n_actions_ != second.n_actions_)
        throw ValidationError("policy shapes differ");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("mixture weight must lie in [0,1]");
    std::vector<double> probs(first.probs_.size());
    for (int s = 0; s < first.n_states_; ++s) {
        double total = 0.0;
        for (int a = 0; a < first.n_actions_; ++a) {
            const auto i = static_cast<std::size_t>(s) * first.n_actions_ + a;
            probs[i] = alpha * first.probs_[i] + (1.0 - alpha) * second.probs_[i];
            total += probs[i];
        }
        for (int a = 0; a < first.n_actions_; ++a) probs[static_cast<std::size_t>(s) * first.n_actions_ + a] /= total;
    }
    return {first.n_states_, first.n_actions_, std::move(probs)};
}

int Policy::argmax(int s) const noexcept {
    const auto r = row(s);
    return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

StateGrid::StateGrid(std::vector<double> lower, std::vector<double> upper, int cells_per_dim)
    : lower_(std::move(lower)), upper_(std::move(upper)), cells_per_dim_(cells_per_dim) {
    if (lower_.empty() || lower_.size() != upper_.size()) throw ValidationError("grid bounds are inconsistent");
    if (cells_per_dim_ <= 0) throw ValidationError("cells_per_dim must be positive");
    for (std::size_t i = 0; i < lower_.size(); ++i)
        if (!(upper_[i] > lower_[i])) throw ValidationError("grid box has an empty side");
    n_cells_ = 1;
    for (std::size_t i = 0; i < lower_.size(); ++i) n_cells_ *= cells_per_dim_;
}

double StateGrid::cell_volume() const noexcept {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= cell_width(i);
    return v;
}

double StateGrid::volume() const noexcept {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= upper_[i] - lower_[i];
    return v;
}

int StateGrid::cell_of(std::span<const double> x) const noexcept {
    int index = 0;
    for (int i = dim() - 1; i >= 0; --i) {
        auto k = static_cast<int>(std::floor((x[i] - lower_[i]) / cell_width(i)));
        k = std::clamp(k, 0, cells_per_dim_ - 1);
        index = index * cells_per_dim_ + k;
    }
    return index;
}

std::vector<double> StateGrid::cell_center(int cell) const {
    std::vector<double> c(lower_.size());
    for (int i = 0; i < dim(); ++i) {
        const int k = cell % cells_per_dim_;
        cell /= cells_per_dim_;
        c[i] = lower_[i] + (k + 0.5) * cell_width(i);
    }
    return c;
}

std::vector<double> StateGrid::sample_in_cell(int cell, Rng& rng) const {
    std::vector<double> x(lower_.size());
    for (int i = 0; i < dim(); ++i) {
        const int k = cell % cells_per_dim_;
        cell /= cells_per_dim_;
        x[i] = lower_[i] + (k + uniform01(rng)) * cell_width(i);
    }
    return x;
}

bool StateGrid::contains(std::span<const double> x) const noexcept {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    return true;
}

double ContinuousMdp::state_volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
}

void ContinuousMdp::validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw ValidationError("state box is inconsistent");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(upper[i] > lower[i])) throw ValidationError("state box has an empty side");
    if (n_actions <= 0) throw ValidationError("n_actions must be positive");
    if (!(action_measure > 0.0)) throw ValidationError("action measure must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    if (!transition_sampler || !reward_fn || !mu0_sampler)
        throw ValidationError("continuous MDP is missing a sampler or the reward function");
    if (holder_beta < 1 || !(holder_const > 0.0)) throw ValidationError("smoothness metadata is invalid");
}

} // namespace passive_rl
