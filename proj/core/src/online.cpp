#include "passive_rl/online.hpp"

#include "passive_rl/csv.hpp"
#include "passive_rl/discretize.hpp"
#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"
#include "passive_rl/rollout.hpp"

#include <cmath>
#include <string>

namespace passive_rl {

namespace {

constexpr double kEtaFloor = 1e-6;
constexpr double kDefaultTruncation = 1e-3;

std::vector<Transition> collect_transitions(std::span<const Episode> episodes) {
    std::vector<Transition> out;
    for (const auto& e : episodes)
        for (const auto& step : e.steps) out.push_back({step.state, step.action, step.reward, step.next_state});
    return out;
}

bool strictly_positive(const OccupancyTable& t) {
    for (double x : t.values())
        if (!(x > 0.0)) return false;
    return true;
}

void check_config(const OnlineConfig& config) {
    if (config.rounds < 1) throw ValidationError("rounds must be at least 1");
    if (config.episodes_per_round < 1) throw ValidationError("episodes_per_round must be at least 1");
    if (config.eta && !(*config.eta > 0.0 && std::isfinite(*config.eta)))
        throw ValidationError("eta must be positive and finite");
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw ValidationError("delta must lie in (0,1)");
    if (!(config.smoothing_floor >= 0.0 && config.smoothing_floor <= 1.0))
        throw ValidationError("smoothing_floor must lie in [0,1]");
}

Policy round_policy(const TabularMdp& mdp, const OccupancyTable& ref, double eta, const SolverOptions& solver, int round,
                    int& iterations) {
    const auto report = solve_dual(ref, mdp, eta, solver);
    if (!report.converged)
        throw NumericalError("dual solve did not converge at round " + std::to_string(round) +
                             " (gradient norm " + format_double(report.grad_inf_norm) + ")");
    iterations = report.iterations;
    return extract_policy(extract_occupancy(report.v_star, ref, mdp, eta));
}

void push_round(RegretRecord& record, double gap, double eta, int iterations, double bound, Policy policy) {
    record.per_round_gap.push_back(gap);
    record.cumulative.push_back((record.cumulative.empty() ? 0.0 : record.cumulative.back()) + gap);
    record.eta.push_back(eta);
    record.solver_iters.push_back(iterations);
    record.estimator_error_bound.push_back(bound);
    record.policies.push_back(std::move(policy));
}

std::vector<Episode> bin_episodes(std::span<const ContinuousEpisode> episodes, const StateGrid& grid) {
    std::vector<Episode> out;
    out.reserve(episodes.size());
    for (const auto& e : episodes) {
        Episode binned;
        binned.horizon = e.horizon;
        binned.seed = e.seed;
        for (const auto& step : e.steps)
            binned.steps.push_back({grid.cell_of(step.state), step.action, step.reward, grid.cell_of(step.next_state)});
        out.push_back(std::move(binned));
    }
    return out;
}

} // namespace

PassiveMemory build_memory(std::span<const Episode> episodes, int n_states, int n_actions, double gamma,
                           Estimator estimator, double smoothing_floor) {
    if (estimator != Estimator::plugin)
        throw ValidationError("tabular memories use the plug-in estimator; kde needs continuous states");
    if (episodes.empty()) throw ValidationError("episode list is empty");
    if (!(smoothing_floor >= 0.0 && smoothing_floor <= 1.0)) throw ValidationError("smoothing floor must lie in [0,1]");
    auto raw = plugin_estimate(episodes, n_states, n_actions, gamma, episodes.front().horizon);
    auto ref = raw.mixed_with_uniform(smoothing_floor);
    const bool coverage = strictly_positive(raw);
    return {collect_transitions(episodes), std::move(raw), std::move(ref), std::nullopt, smoothing_floor, coverage};
}

PassiveMemory memory_from_table(const OccupancyTable& table, double smoothing_floor) {
    if (!(smoothing_floor >= 0.0 && smoothing_floor <= 1.0)) throw ValidationError("smoothing floor must lie in [0,1]");
    auto raw = table.normalized_copy();
    auto ref = raw.mixed_with_uniform(smoothing_floor);
    const bool coverage = strictly_positive(raw);
    return {{}, std::move(raw), std::move(ref), std::nullopt, smoothing_floor, coverage};
}

bool memory_covers(const PassiveMemory& memory, const OccupancyTable& d_star) {
    if (!memory.raw_dist.same_shape(d_star)) throw ValidationError("occupancy shapes differ");
    for (int s = 0; s < d_star.n_states(); ++s)
        for (int a = 0; a < d_star.n_actions(); ++a)
            if (d_star.at(s, a) > 0.0 && !(memory.raw_dist.at(s, a) > 0.0)) return false;
    return true;
}

OccupancyTable kde_to_table(const KdeModel& model, const StateGrid& grid) {
    if (grid.dim() != model.dim()) throw ValidationError("grid dimension does not match the estimate");
    std::vector<double> values(static_cast<std::size_t>(grid.n_cells()) * model.n_actions());
    for (int c = 0; c < grid.n_cells(); ++c) {
        const auto centre = grid.cell_center(c);
        for (int a = 0; a < model.n_actions(); ++a)
            values[static_cast<std::size_t>(c) * model.n_actions() + a] = model.evaluate(centre, a) * grid.cell_volume();
    }
    OccupancyTable unnormalized(grid.n_cells(), model.n_actions(), std::move(values), false);
    if (!(unnormalized.total() > 0.0)) throw ValidationError("kernel estimate has no mass on the grid");
    return unnormalized.normalized_copy();
}

PassiveMemory build_memory(std::span<const ContinuousEpisode> episodes, const ContinuousMdp& mdp,
                           const StateGrid& grid, const KernelSpec& kernel, double smoothing_floor) {
    if (episodes.empty()) throw ValidationError("episode list is empty");
    if (!(smoothing_floor >= 0.0 && smoothing_floor <= 1.0)) throw ValidationError("smoothing floor must lie in [0,1]");
    auto model =
        kde_estimate(episodes, mdp.n_actions, kernel, mdp.gamma, episodes.front().horizon, mdp.lower, mdp.upper);
    auto raw = kde_to_table(model, grid);
    auto ref = raw.mixed_with_uniform(smoothing_floor);
    const bool coverage = strictly_positive(raw);
    std::vector<Transition> transitions;
    for (const auto& step : bin_episodes(episodes, grid)) {
        for (const auto& s : step.steps) transitions.push_back({s.state, s.action, s.reward, s.next_state});
    }
    return {std::move(transitions), std::move(raw), std::move(ref), std::move(model), smoothing_floor, coverage};
}

int resolve_horizon(const OnlineConfig& config, double gamma) {
    return config.horizon >= 0 ? config.horizon : horizon_for_tolerance(gamma, kDefaultTruncation);
}

void RegretRecord::save_csv(const std::filesystem::path& path) const {
    CsvWriter out({"round", "gap", "cumulative", "eta", "solver_iters", "estimator_error_bound"});
    for (std::size_t t = 0; t < per_round_gap.size(); ++t) {
        out.row({std::to_string(t + 1), format_double(per_round_gap[t]), format_double(cumulative[t]),
                 format_double(eta[t]), std::to_string(solver_iters[t]), format_double(estimator_error_bound[t])});
    }
    out.save(path);
}

double auto_eta(const TabularMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config,
                const std::optional<OccupancyTable>& d_star) {
    check_config(config);
    const int cells = mdp.n_cells();
    const int horizon = resolve_horizon(config, mdp.gamma());
    const double divergence = d_star ? kl_divergence(*d_star, memory.ref_dist) : std::log(static_cast<double>(cells));
    const double epsilon = plugin_error_bound(config.episodes_per_round, cells, config.delta);
    const double slack = epsilon + std::pow(mdp.gamma(), horizon + 1) / (1.0 - mdp.gamma());
    const double eta = std::sqrt(std::max(0.0, divergence) / (config.rounds * static_cast<double>(cells) * slack));
    return std::max(eta, kEtaFloor);
}

double regret_upper_bound(double kl, int cells, double epsilon, double gamma, int horizon, long long n,
                          long long rounds) {
    if (kl < 0.0 || cells < 0 || epsilon < 0.0 || n < 0 || rounds < 0 || horizon < 0)
        throw ValidationError("regret bound inputs must be nonnegative");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
    const double slack = epsilon + std::pow(gamma, horizon) / (1.0 - gamma);
    return std::sqrt(kl * cells * slack * static_cast<double>(n) * static_cast<double>(rounds));
}

RegretRecord run_online(const TabularMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config) {
    check_config(config);
    if (!memory.ref_dist.same_shape(OccupancyTable::uniform(mdp.n_states(), mdp.n_actions())))
        throw ValidationError("memory shape does not match the MDP");
    const int horizon = resolve_horizon(config, mdp.gamma());
    const auto optimum = optimal_policy(mdp, 1e-12);
    const double eta =
        config.eta ? *config.eta : auto_eta(mdp, memory, config, exact_occupancy(mdp, optimum.policy));
    const double bound = plugin_error_bound(config.episodes_per_round, mdp.n_cells(), config.delta);

    RegretRecord record;
    record.optimal_value = optimum.value;
    OccupancyTable ref = memory.ref_dist;
    for (int t = 1; t <= config.rounds; ++t) {
        int iterations = 0;
        auto policy = round_policy(mdp, ref, eta, config.solver, t, iterations);
        const double gap = optimum.value - exact_value(mdp, policy);
        const auto episodes =
            rollout(mdp, policy, config.episodes_per_round, horizon, derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        ref = plugin_estimate(episodes, mdp.n_states(), mdp.n_actions(), mdp.gamma(), horizon)
                  .mixed_with_uniform(config.smoothing_floor);
        push_round(record, gap, eta, iterations, bound, std::move(policy));
    }
    return record;
}

RegretRecord run_online_continuous(const ContinuousMdp& mdp, const PassiveMemory& memory, const OnlineConfig& config) {
    check_config(config);
    mdp.validate();
    if (config.estimator == Estimator::kde && !config.kernel)
        throw ValidationError("kde runs need a kernel in the configuration");
    if (config.eval_episodes < 2) throw ValidationError("eval_episodes must be at least 2");
    const StateGrid grid(mdp.lower, mdp.upper, config.cells_per_dim);
    const auto model = discretize(mdp, grid, config.samples_per_cell, derive_seed(config.seed, 0x5EED0001ULL));
    if (!memory.ref_dist.same_shape(OccupancyTable::uniform(model.n_states(), model.n_actions())))
        throw ValidationError("memory shape does not match the grid");
    const int horizon = resolve_horizon(config, mdp.gamma);

    const auto optimum = optimal_policy(model, 1e-12);
    const auto baseline = estimate_value(mdp, BinnedPolicy{grid, optimum.policy}, config.eval_episodes, horizon,
                                         derive_seed(config.seed, 0x5EED0002ULL));
    const double eta =
        config.eta ? *config.eta : auto_eta(model, memory, config, exact_occupancy(model, optimum.policy));
    const double bound =
        config.estimator == Estimator::kde
            ? kde_l1_bound(*config.kernel, mdp.state_volume(), mdp.action_measure, config.episodes_per_round,
                           config.delta)
            : plugin_error_bound(config.episodes_per_round, model.n_cells(), config.delta);

    RegretRecord record;
    record.optimal_value = baseline.mean;
    OccupancyTable ref = memory.ref_dist;
    for (int t = 1; t <= config.rounds; ++t) {
        int iterations = 0;
        auto policy = round_policy(model, ref, eta, config.solver, t, iterations);
        const BinnedPolicy binned{grid, policy};
        const auto value = estimate_value(mdp, binned, config.eval_episodes, horizon,
                                          derive_seed(config.seed, 2 * static_cast<std::uint64_t>(t) + 1));
        const auto episodes = rollout(mdp, binned, config.episodes_per_round, horizon,
                                      derive_seed(config.seed, 2 * static_cast<std::uint64_t>(t)));
        OccupancyTable estimate =
            config.estimator == Estimator::kde
                ? kde_to_table(kde_estimate(episodes, mdp.n_actions, *config.kernel, mdp.gamma, horizon, mdp.lower,
                                            mdp.upper),
                               grid)
                : plugin_estimate(bin_episodes(episodes, grid), model.n_states(), model.n_actions(), mdp.gamma,
                                  horizon);
        ref = estimate.mixed_with_uniform(config.smoothing_floor);
        record.gap_half_width.push_back(std::hypot(baseline.half_width, value.half_width));
        push_round(record, baseline.mean - value.mean, eta, iterations, bound, std::move(policy));
    }
    return record;
}

} // namespace passive_rl
