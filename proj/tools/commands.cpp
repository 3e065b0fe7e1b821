#include "commands.hpp"

#include "passive_rl/adversarial.hpp"
#include "passive_rl/csv.hpp"
#include "passive_rl/density.hpp"
#include "passive_rl/dual_solver.hpp"
#include "passive_rl/errors.hpp"
#include "passive_rl/exact.hpp"
#include "passive_rl/instances.hpp"
#include "passive_rl/kernel.hpp"
#include "passive_rl/mdp_io.hpp"
#include "passive_rl/online.hpp"
#include "passive_rl/parallel.hpp"
#include "passive_rl/rollout.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <variant>

namespace passive_rl::cli {

namespace {

// Stream tags for seeds derived from the master seed.
constexpr std::uint64_t kMemoryStream = 0x4D454D4FULL;
constexpr std::uint64_t kPolicyStream = 0x504F4C49ULL;
constexpr std::uint64_t kEstimateStream = 0x45535449ULL;

const std::set<std::string> kSolverKeys = {"tol", "max_iters", "method"};

std::set<std::string> with_solver_keys(std::set<std::string> keys) {
    keys.insert(kSolverKeys.begin(), kSolverKeys.end());
    return keys;
}

using AnyMdp = std::variant<TabularMdp, ContinuousMdp>;

AnyMdp load_any_mdp(const Config& cfg, const std::string& section) {
    const std::string spec = cfg.get_string(section, "mdp", "");
    if (spec.empty()) throw ValidationError(section + ".mdp is required");
    if (spec.starts_with("builtin:")) {
        const std::string name = spec.substr(8);
        if (name == "two_state_cycle") return instances::two_state_cycle();
        if (name == "benchmark_2x2") return instances::benchmark_2x2();
        if (name == "benchmark_3x2") return instances::benchmark_3x2();
        if (name == "random_walk") return instances::random_walk_mdp();
        if (name == "bump") return instances::iid_bump_mdp();
        throw ValidationError("unknown builtin MDP '" + name + "'");
    }
    return load_mdp(cfg.resolve(spec));
}

TabularMdp load_tabular(const Config& cfg, const std::string& section) {
    auto mdp = load_any_mdp(cfg, section);
    if (!std::holds_alternative<TabularMdp>(mdp))
        throw ValidationError(section + ": this command needs a tabular MDP");
    return std::get<TabularMdp>(std::move(mdp));
}

DescentMethod parse_method(const std::string& name) {
    if (name == "gradient") return DescentMethod::gradient;
    if (name == "newton") return DescentMethod::newton;
    throw ValidationError("unknown solver method '" + name + "' (expected gradient or newton)");
}

Estimator parse_estimator(const std::string& name) {
    if (name == "plugin") return Estimator::plugin;
    if (name == "kde") return Estimator::kde;
    throw ValidationError("unknown estimator '" + name + "' (expected plugin or kde)");
}

SolverOptions solver_options(const Config& cfg, const std::string& section, SolverOptions base) {
    base.tol = cfg.get_double(section, "tol", base.tol);
    base.max_iters = cfg.get_int(section, "max_iters", base.max_iters);
    if (cfg.has(section, "method")) base.method = parse_method(cfg.get_string(section, "method", ""));
    if (!(base.tol > 0.0)) throw ValidationError(section + ".tol must be positive");
    if (base.max_iters < 0) throw ValidationError(section + ".max_iters must be nonnegative");
    return base;
}

double parse_fraction(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size() || !(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(text);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(what + ": expected a number in [0,1], got '" + text + "'");
    }
}

int parse_count(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(text, &used);
        if (used != text.size() || x < 1) throw std::invalid_argument(text);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(what + ": expected a positive integer, got '" + text + "'");
    }
}

Policy parse_policy(const std::string& spec, const TabularMdp& mdp) {
    const auto uniform = Policy::uniform(mdp.n_states(), mdp.n_actions());
    if (spec == "uniform") return uniform;
    if (spec == "optimal") return optimal_policy(mdp).policy;
    if (spec.starts_with("mixture:"))
        return Policy::mixture(optimal_policy(mdp).policy, uniform, parse_fraction(spec.substr(8), "policy mixture"));
    throw ValidationError("unknown policy '" + spec + "' (expected uniform, optimal or mixture:<alpha>)");
}

// Memory specs: uniform | optimal | mixture:<alpha> | sampled:<alpha>:<episodes> | <occupancy csv>.
void check_memory_spec(const std::string& spec) {
    if (spec == "uniform" || spec == "optimal") return;
    if (spec.starts_with("mixture:")) {
        parse_fraction(spec.substr(8), "memory mixture");
        return;
    }
    if (spec.starts_with("sampled:")) {
        const auto rest = spec.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw ValidationError("memory spec sampled:<alpha>:<episodes> is incomplete");
        parse_fraction(rest.substr(0, colon), "memory mixture");
        parse_count(rest.substr(colon + 1), "memory episodes");
    }
}

PassiveMemory tabular_memory(const std::string& spec, const TabularMdp& mdp, double floor, int horizon,
                             std::uint64_t seed, const Config& cfg) {
    check_memory_spec(spec);
    const int n = mdp.n_states();
    const int m = mdp.n_actions();
    if (spec == "uniform") return memory_from_table(OccupancyTable::uniform(n, m), floor);
    if (spec == "optimal") return memory_from_table(exact_occupancy(mdp, optimal_policy(mdp).policy), floor);
    if (spec.starts_with("mixture:")) return memory_from_table(exact_occupancy(mdp, parse_policy(spec, mdp)), floor);
    if (spec.starts_with("sampled:")) {
        const auto rest = spec.substr(8);
        const auto colon = rest.find(':');
        const auto policy = parse_policy("mixture:" + rest.substr(0, colon), mdp);
        const int episodes = parse_count(rest.substr(colon + 1), "memory episodes");
        const auto data = rollout(mdp, policy, episodes, horizon, derive_seed(seed, kMemoryStream));
        return build_memory(data, n, m, mdp.gamma(), Estimator::plugin, floor);
    }
    const auto table = OccupancyTable::load_csv(cfg.resolve(spec));
    if (table.n_states() != n || table.n_actions() != m) throw ValidationError("memory table shape does not match the MDP");
    return memory_from_table(table, floor);
}

PassiveMemory continuous_memory(const std::string& spec, const ContinuousMdp& mdp, const OnlineConfig& config,
                                int horizon, std::uint64_t seed) {
    const StateGrid grid(mdp.lower, mdp.upper, config.cells_per_dim);
    if (spec == "uniform")
        return memory_from_table(OccupancyTable::uniform(grid.n_cells(), mdp.n_actions), config.smoothing_floor);
    if (spec.starts_with("sampled:")) {
        const int episodes = parse_count(spec.substr(8), "memory episodes");
        const BinnedPolicy policy{StateGrid(mdp.lower, mdp.upper, 1), Policy::uniform(1, mdp.n_actions)};
        const auto data = rollout(mdp, policy, episodes, horizon, derive_seed(seed, kMemoryStream));
        return build_memory(data, mdp, grid, *config.kernel, config.smoothing_floor);
    }
    throw ValidationError("continuous memories are 'uniform' or 'sampled:<episodes>', got '" + spec + "'");
}

KernelSpec kernel_from(const Config& cfg, const std::string& section, int dim, double holder_const) {
    const std::string name = cfg.get_string(section, "kernel", "epanechnikov");
    const double bandwidth = cfg.get_double(section, "bandwidth", 0.1);
    if (!(bandwidth > 0.0)) throw ValidationError(section + ".bandwidth must be positive");
    return kernel_validate(named_kernel(name), 2, dim, bandwidth, holder_const, name);
}

const std::set<std::string> kOnlineKeys = with_solver_keys(
    {"mdp", "memory", "rounds", "episodes", "horizon", "eta", "estimator", "delta", "floor", "seeds", "kernel",
     "bandwidth", "cells_per_dim", "samples_per_cell", "eval_episodes"});

OnlineConfig online_config(const Config& cfg, const std::string& section, std::uint64_t seed, const AnyMdp& mdp) {
    OnlineConfig c;
    c.rounds = cfg.get_int(section, "rounds", c.rounds);
    c.episodes_per_round = cfg.get_int(section, "episodes", c.episodes_per_round);
    c.horizon = cfg.get_int(section, "horizon", c.horizon);
    const std::string eta = cfg.get_string(section, "eta", "auto");
    if (eta != "auto") c.eta = cfg.get_double(section, "eta", 1.0);
    c.delta = cfg.get_double(section, "delta", c.delta);
    c.smoothing_floor = cfg.get_double(section, "floor", c.smoothing_floor);
    c.solver = solver_options(cfg, section, c.solver);
    c.seed = seed;
    c.cells_per_dim = cfg.get_int(section, "cells_per_dim", c.cells_per_dim);
    c.samples_per_cell = cfg.get_int(section, "samples_per_cell", c.samples_per_cell);
    c.eval_episodes = cfg.get_int(section, "eval_episodes", c.eval_episodes);
    if (const auto* cont = std::get_if<ContinuousMdp>(&mdp)) {
        c.estimator = parse_estimator(cfg.get_string(section, "estimator", "kde"));
        c.kernel = kernel_from(cfg, section, cont->state_dim(), cont->holder_const);
        if (c.cells_per_dim < 1) throw ValidationError(section + ".cells_per_dim must be at least 1");
        if (c.samples_per_cell < 1) throw ValidationError(section + ".samples_per_cell must be at least 1");
        if (c.eval_episodes < 2) throw ValidationError(section + ".eval_episodes must be at least 2");
    } else {
        c.estimator = parse_estimator(cfg.get_string(section, "estimator", "plugin"));
        if (c.estimator != Estimator::plugin) throw ValidationError("tabular runs use the plugin estimator");
    }
    if (c.rounds < 1) throw ValidationError(section + ".rounds must be at least 1");
    if (c.episodes_per_round < 1) throw ValidationError(section + ".episodes must be at least 1");
    if (c.eta && !(*c.eta > 0.0)) throw ValidationError(section + ".eta must be positive or 'auto'");
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ValidationError(section + ".delta must lie in (0,1)");
    if (!(c.smoothing_floor >= 0.0 && c.smoothing_floor <= 1.0))
        throw ValidationError(section + ".floor must lie in [0,1]");
    return c;
}

RegretRecord run_any(const AnyMdp& mdp, const std::string& memory_spec, const OnlineConfig& config,
                     const Config& cfg) {
    if (const auto* tab = std::get_if<TabularMdp>(&mdp)) {
        const int horizon = resolve_horizon(config, tab->gamma());
        const auto memory = tabular_memory(memory_spec, *tab, config.smoothing_floor, horizon, config.seed, cfg);
        return run_online(*tab, memory, config);
    }
    const auto& cont = std::get<ContinuousMdp>(mdp);
    const int horizon = resolve_horizon(config, cont.gamma);
    const auto memory = continuous_memory(memory_spec, cont, config, horizon, config.seed);
    return run_online_continuous(cont, memory, config);
}

void write_metadata(const CommonOptions& opts, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    CsvWriter out({"key", "value"});
    out.row({"command", command});
    out.row({"seed", std::to_string(opts.seed)});
    for (const auto& [k, v] : opts.config.entries()) {
        if (k == "seed") continue;
        out.row({k, v});
    }
    for (const auto& [k, v] : extra) out.row({k, v});
    out.save(opts.out / "run.csv");
}

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;
};

MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    double var = 0.0;
    for (double x : xs) var += (x - r.mean) * (x - r.mean);
    var /= static_cast<double>(xs.size() - 1);
    r.half_width = 1.96 * std::sqrt(var / static_cast<double>(xs.size()));
    return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

void save_policy_csv(const Policy& policy, const std::filesystem::path& path) {
    CsvWriter out({"s", "a", "prob"});
    for (int s = 0; s < policy.n_states(); ++s)
        for (int a = 0; a < policy.n_actions(); ++a)
            out.row({std::to_string(s), std::to_string(a), format_double(policy.prob(s, a))});
    out.save(path);
}

} // namespace

int cmd_solve(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "solve"});
    cfg.require_known("solve", with_solver_keys({"mdp", "memory", "eta", "floor"}));
    const auto mdp = load_tabular(cfg, "solve");
    const double eta = cfg.get_double("solve", "eta", 1.0);
    const double floor = cfg.get_double("solve", "floor", 0.0);
    if (!(floor >= 0.0 && floor <= 1.0)) throw ValidationError("solve.floor must lie in [0,1]");
    const auto options = solver_options(cfg, "solve", SolverOptions{});
    const std::string memory_spec = cfg.get_string("solve", "memory", "uniform");
    if (memory_spec.starts_with("sampled:")) throw ValidationError("solve takes an exact memory, not sampled:");
    const int horizon = horizon_for_tolerance(mdp.gamma(), 1e-3);
    const auto memory = tabular_memory(memory_spec, mdp, floor, horizon, opts.seed, cfg);
    if (!(eta > 0.0)) throw ValidationError("solve.eta must be positive");

    std::filesystem::create_directories(opts.out);
    const auto report = solve_dual(memory.ref_dist, mdp, eta, options);
    const auto occupancy = extract_occupancy(report.v_star, memory.ref_dist, mdp, eta);
    CsvWriter summary({"objective", "grad_inf_norm", "iterations", "converged"});
    summary.row({format_double(report.objective), format_double(report.grad_inf_norm),
                 std::to_string(report.iterations), report.converged ? "1" : "0"});
    summary.save(opts.out / "solve_report.csv");
    save_policy_csv(extract_policy(occupancy), opts.out / "policy.csv");
    occupancy.save_csv(opts.out / "occupancy.csv");
    write_metadata(opts, "solve");
    if (!report.converged) {
        std::cerr << "dual solve did not converge: gradient norm " << format_double(report.grad_inf_norm) << " after "
                  << report.iterations << " iterations\n";
        return kNotConverged;
    }
    return kSuccess;
}

int cmd_online(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "online"});
    cfg.require_known("online", kOnlineKeys);
    const auto mdp = load_any_mdp(cfg, "online");
    const auto base = online_config(cfg, "online", opts.seed, mdp);
    const std::string memory_spec = cfg.get_string("online", "memory", "uniform");
    if (std::holds_alternative<TabularMdp>(mdp)) check_memory_spec(memory_spec);
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split_list(cfg.get_string("online", "seeds", ""))) {
        Config one;
        one.set("", "s", s);
        seeds.push_back(one.get_u64("", "s", 0));
    }

    std::filesystem::create_directories(opts.out);
    if (seeds.empty()) {
        run_any(mdp, memory_spec, base, cfg).save_csv(opts.out / "regret.csv");
        write_metadata(opts, "online");
        return kSuccess;
    }
    std::vector<std::optional<RegretRecord>> records(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        OnlineConfig c = base;
        c.seed = seeds[i];
        records[i] = run_any(mdp, memory_spec, c, cfg);
    });
    CsvWriter summary({"seed", "cumulative_regret", "final_gap"});
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        records[i]->save_csv(opts.out / ("regret_seed" + std::to_string(seeds[i]) + ".csv"));
        summary.row({std::to_string(seeds[i]), format_double(records[i]->total()),
                     format_double(records[i]->per_round_gap.back())});
    }
    summary.save(opts.out / "seeds_summary.csv");
    write_metadata(opts, "online");
    return kSuccess;
}

int cmd_sweep(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "online", "sweep"});
    cfg.require_known("online", kOnlineKeys);
    cfg.require_known("sweep", {"axis", "values", "seeds", "memory_episodes"});
    const std::string axis = cfg.get_string("sweep", "axis", "");
    static const std::set<std::string> axes = {"memory_alpha", "T", "n", "bandwidth", "H"};
    if (!axes.contains(axis)) throw ValidationError("sweep.axis must be one of memory_alpha, T, n, bandwidth, H");
    const auto values = cfg.get_doubles("sweep", "values");
    if (values.empty()) throw ValidationError("sweep.values is empty");
    const int n_seeds = cfg.get_int("sweep", "seeds", 20);
    if (n_seeds < 1) throw ValidationError("sweep.seeds must be at least 1");
    const int memory_episodes = cfg.get_int("sweep", "memory_episodes", 1000);
    if (memory_episodes < 0) throw ValidationError("sweep.memory_episodes must be nonnegative");
    const auto mdp = load_any_mdp(cfg, "online");
    const bool continuous = std::holds_alternative<ContinuousMdp>(mdp);
    const auto base = online_config(cfg, "online", opts.seed, mdp);
    const std::string base_memory = cfg.get_string("online", "memory", "uniform");
    if (!continuous) check_memory_spec(base_memory);

    // Resolve every point before running anything.
    std::vector<OnlineConfig> configs;
    std::vector<std::string> memories;
    for (double v : values) {
        OnlineConfig c = base;
        std::string memory = base_memory;
        if (axis == "memory_alpha") {
            if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("memory_alpha values must lie in [0,1]");
            if (continuous) throw ValidationError("memory_alpha sweeps need a tabular MDP");
            memory = memory_episodes > 0 ? "sampled:" + format_double(v) + ":" + std::to_string(memory_episodes)
                                         : "mixture:" + format_double(v);
        } else if (axis == "T" || axis == "n" || axis == "H") {
            if (v != std::floor(v) || v < (axis == "H" ? 0.0 : 1.0))
                throw ValidationError(axis + " values must be " + (axis == "H" ? "nonnegative" : "positive") +
                                      " integers");
            (axis == "T" ? c.rounds : axis == "n" ? c.episodes_per_round : c.horizon) = static_cast<int>(v);
        } else {
            if (!continuous) throw ValidationError("bandwidth sweeps need a continuous MDP");
            if (!(v > 0.0)) throw ValidationError("bandwidth values must be positive");
            c.kernel->bandwidth = v;
        }
        configs.push_back(c);
        memories.push_back(memory);
    }

    std::filesystem::create_directories(opts.out);
    const std::size_t jobs = values.size() * static_cast<std::size_t>(n_seeds);
    std::vector<double> totals(jobs);
    std::vector<double> finals(jobs);
    std::vector<std::uint64_t> job_seeds(n_seeds);
    for (int k = 0; k < n_seeds; ++k) job_seeds[k] = derive_seed(opts.seed, static_cast<std::uint64_t>(k + 1));
    parallel_for(jobs, [&](std::size_t j) {
        const std::size_t point = j / n_seeds;
        OnlineConfig c = configs[point];
        c.seed = job_seeds[j % n_seeds];
        const auto record = run_any(mdp, memories[point], c, cfg);
        totals[j] = record.total();
        finals[j] = record.per_round_gap.back();
    });

    std::string slope_text;
    std::string slope_hw_text;
    if (axis == "T" && values.size() >= 2) {
        std::vector<double> slopes;
        std::vector<double> log_t;
        for (double v : values) log_t.push_back(std::log(v));
        for (int k = 0; k < n_seeds; ++k) {
            std::vector<double> log_r;
            for (std::size_t p = 0; p < values.size(); ++p)
                log_r.push_back(std::log(std::max(totals[p * n_seeds + k], 1e-300)));
            slopes.push_back(least_squares_slope(log_t, log_r));
        }
        const auto s = mean_ci(slopes);
        slope_text = format_double(s.mean);
        slope_hw_text = format_double(s.half_width);
    }

    CsvWriter summary({"axis", "value", "mean_regret", "half_width", "mean_final_gap", "final_gap_half_width", "slope",
                       "slope_half_width"});
    for (std::size_t p = 0; p < values.size(); ++p) {
        CsvWriter point({"seed", "value", "cumulative_regret", "final_gap"});
        std::vector<double> r(totals.begin() + p * n_seeds, totals.begin() + (p + 1) * n_seeds);
        std::vector<double> g(finals.begin() + p * n_seeds, finals.begin() + (p + 1) * n_seeds);
        for (int k = 0; k < n_seeds; ++k)
            point.row({std::to_string(job_seeds[k]), format_double(values[p]), format_double(r[k]),
                       format_double(g[k])});
        point.save(opts.out / ("point_" + std::to_string(p) + ".csv"));
        const auto rs = mean_ci(r);
        const auto gs = mean_ci(g);
        summary.row({axis, format_double(values[p]), format_double(rs.mean), format_double(rs.half_width),
                     format_double(gs.mean), format_double(gs.half_width), slope_text, slope_hw_text});
    }
    summary.save(opts.out / "summary.csv");
    write_metadata(opts, "sweep");
    return kSuccess;
}

int cmd_lowerbound(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "lowerbound"});
    cfg.require_known("lowerbound", with_solver_keys({"states", "actions", "gamma", "delta", "c", "rounds", "episodes",
                                                      "horizon", "learner", "seeds", "mode", "adversarial_state",
                                                      "adversarial_action", "kl_horizon", "kl_policies", "eta",
                                                      "floor"}));
    const std::string sec = "lowerbound";
    const int n_states = cfg.get_int(sec, "states", 2);
    const int n_actions = cfg.get_int(sec, "actions", 2);
    const double gamma = cfg.get_double(sec, "gamma", 0.9);
    const double c = cfg.get_double(sec, "c", 8.0);
    const int n_seeds = cfg.get_int(sec, "seeds", 100);
    const int kl_horizon = cfg.get_int(sec, "kl_horizon", 2);
    const int kl_policies = cfg.get_int(sec, "kl_policies", 50);
    const std::string mode = cfg.get_string(sec, "mode", "adaptive");
    const auto learner = parse_learner(cfg.get_string(sec, "learner", "uniform"));
    const Cell static_cell{cfg.get_int(sec, "adversarial_state", n_actions > 1 ? 0 : 1),
                           cfg.get_int(sec, "adversarial_action", n_actions > 1 ? 1 : 0)};

    OnlineConfig base;
    base.rounds = cfg.get_int(sec, "rounds", 50);
    base.episodes_per_round = cfg.get_int(sec, "episodes", 10);
    base.horizon = cfg.get_int(sec, "horizon", -1);
    if (cfg.get_string(sec, "eta", "auto") != "auto") base.eta = cfg.get_double(sec, "eta", 1.0);
    base.smoothing_floor = cfg.get_double(sec, "floor", base.smoothing_floor);
    base.solver = solver_options(cfg, sec, base.solver);
    if (base.rounds < 1 || base.episodes_per_round < 1) throw ValidationError("rounds and episodes must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("lowerbound.gamma must lie in (0,1)");
    if (!(c > 0.0)) throw ValidationError("lowerbound.c must be positive");
    if (n_seeds < 1 || kl_policies < 1 || kl_horizon < 0) throw ValidationError("seeds, kl_policies must be positive");
    if (mode != "adaptive" && mode != "static") throw ValidationError("lowerbound.mode must be adaptive or static");
    const std::string delta_text = cfg.get_string(sec, "delta", "auto");
    const double delta = delta_text == "auto" ? optimal_delta(n_states, n_actions, gamma, c, base.episodes_per_round,
                                                              base.rounds)
                                              : cfg.get_double(sec, "delta", 0.0);
    // builds and validates the pair (delta range, cells, adversarial cell)
    const auto static_pair = make_hard_pair(n_states, n_actions, gamma, delta, static_cell);
    const double branches = std::pow(2.0 * n_states * n_actions, kl_horizon + 1);
    if (branches > 1e7)
        throw EnumerationGuardError("kl_horizon " + std::to_string(kl_horizon) +
                                    " exceeds the enumeration guard: (S A 2)^(H+1) = " + format_double(branches) +
                                    " > 1e7");

    std::filesystem::create_directories(opts.out);
    std::vector<PairResult> results(n_seeds);
    std::vector<std::uint64_t> seeds(n_seeds);
    for (int k = 0; k < n_seeds; ++k) seeds[k] = derive_seed(opts.seed, static_cast<std::uint64_t>(k + 1));
    parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t k) {
        OnlineConfig run = base;
        run.seed = seeds[k];
        const auto pair = mode == "adaptive" ? make_adaptive_pair(learner, n_states, n_actions, gamma, delta, run)
                                             : static_pair;
        results[k] = evaluate_learner_on_pair(learner, pair, run);
    });
    CsvWriter audit({"seed", "R_m", "R_m_prime", "pair_sum", "lower_bound_value", "delta", "holds"});
    int holds = 0;
    for (int k = 0; k < n_seeds; ++k) {
        const auto& r = results[k];
        const bool ok = r.pair_sum() >= r.lower_bound_value;
        holds += ok ? 1 : 0;
        audit.row({std::to_string(seeds[k]), format_double(r.r_m), format_double(r.r_m_prime),
                   format_double(r.pair_sum()), format_double(r.lower_bound_value), format_double(r.delta),
                   ok ? "1" : "0"});
    }
    audit.save(opts.out / "pair_audit.csv");

    CsvWriter kl({"policy", "horizon", "enumerated", "decomposed", "abs_diff"});
    for (int p = 0; p < kl_policies; ++p) {
        Rng rng(derive_seed(opts.seed, kPolicyStream + static_cast<std::uint64_t>(p)));
        const Policy policy =
            p == 0 ? Policy::uniform(n_states, n_actions) : instances::random_policy(n_states, n_actions, rng);
        for (int h = 0; h <= kl_horizon; ++h) {
            const double e = enumerate_history_kl(static_pair, policy, h);
            const double d = occupancy_weighted_kl(static_pair, policy, h);
            kl.row({std::to_string(p), std::to_string(h), format_double(e), format_double(d),
                    format_double(std::abs(e - d))});
        }
    }
    kl.save(opts.out / "kl_audit.csv");
    write_metadata(opts, "lowerbound",
                   {{"resolved_delta", format_double(delta)},
                    {"fraction_holds", format_double(static_cast<double>(holds) / n_seeds)}});
    return kSuccess;
}

int cmd_validate_kernel(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "kernel"});
    cfg.require_known("kernel", {"name", "beta", "dim", "bandwidth", "holder_const"});
    const std::string name = cfg.get_string("kernel", "name", "epanechnikov");
    const int beta = cfg.get_int("kernel", "beta", 2);
    const int dim = cfg.get_int("kernel", "dim", 1);
    const double bandwidth = cfg.get_double("kernel", "bandwidth", 0.1);
    const double holder = cfg.get_double("kernel", "holder_const", 1.0);
    if (!(bandwidth > 0.0)) throw ValidationError("kernel.bandwidth must be positive");
    const auto spec = kernel_validate(named_kernel(name), beta, dim, bandwidth, holder, name);
    std::filesystem::create_directories(opts.out);
    CsvWriter out({"name", "beta", "dim", "c_k", "bandwidth", "holder_const", "bias_bound"});
    out.row({name, std::to_string(beta), std::to_string(dim), format_double(spec.c_k), format_double(bandwidth),
             format_double(holder), format_double(kde_bias_bound(spec))});
    out.save(opts.out / "kernel.csv");
    write_metadata(opts, "validate-kernel");
    return kSuccess;
}

int cmd_estimate(const CommonOptions& opts) {
    const auto& cfg = opts.config;
    cfg.require_sections({"", "estimate"});
    cfg.require_known("estimate", {"mdp", "policy", "episodes", "horizon", "delta", "kernel", "bandwidth",
                                   "grid_points"});
    const std::string sec = "estimate";
    const auto mdp = load_any_mdp(cfg, sec);
    const int episodes = cfg.get_int(sec, "episodes", 1000);
    const double delta = cfg.get_double(sec, "delta", 0.05);
    if (episodes < 1) throw ValidationError("estimate.episodes must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("estimate.delta must lie in (0,1)");
    const std::uint64_t seed = derive_seed(opts.seed, kEstimateStream);

    if (const auto* tab = std::get_if<TabularMdp>(&mdp)) {
        const int horizon = cfg.get_int(sec, "horizon", horizon_for_tolerance(tab->gamma(), 1e-3));
        if (horizon < 0) throw ValidationError("estimate.horizon must be nonnegative");
        const auto policy = parse_policy(cfg.get_string(sec, "policy", "uniform"), *tab);
        std::filesystem::create_directories(opts.out);
        const auto data = rollout(*tab, policy, episodes, horizon, seed);
        const auto estimate = plugin_estimate(data, tab->n_states(), tab->n_actions(), tab->gamma(), horizon);
        const auto truth = exact_truncated_occupancy(*tab, policy, horizon);
        const double error = max_abs_difference(estimate, truth);
        const double bound = plugin_error_bound(episodes, tab->n_cells(), delta);
        estimate.save_csv(opts.out / "occupancy.csv");
        CsvWriter report({"episodes", "horizon", "linf_error", "error_bound", "within_bound"});
        report.row({std::to_string(episodes), std::to_string(horizon), format_double(error), format_double(bound),
                    error <= bound ? "1" : "0"});
        report.save(opts.out / "estimate_report.csv");
        write_metadata(opts, "estimate");
        return kSuccess;
    }

    const auto& cont = std::get<ContinuousMdp>(mdp);
    const int horizon = cfg.get_int(sec, "horizon", horizon_for_tolerance(cont.gamma, 1e-3));
    const int grid_points = cfg.get_int(sec, "grid_points", 101);
    if (horizon < 0) throw ValidationError("estimate.horizon must be nonnegative");
    if (grid_points < 2) throw ValidationError("estimate.grid_points must be at least 2");
    if (cfg.get_string(sec, "policy", "uniform") != "uniform")
        throw ValidationError("continuous estimates use the uniform policy");
    const auto kernel = kernel_from(cfg, sec, cont.state_dim(), cont.holder_const);
    std::filesystem::create_directories(opts.out);
    const BinnedPolicy policy{StateGrid(cont.lower, cont.upper, 1), Policy::uniform(1, cont.n_actions)};
    const auto data = rollout(cont, policy, episodes, horizon, seed);
    const auto model = kde_estimate(data, cont.n_actions, kernel, cont.gamma, horizon, cont.lower, cont.upper);
    model.save_grid_csv(opts.out / "kde_grid.csv", grid_points);
    CsvWriter report({"episodes", "horizon", "bandwidth", "integral", "bias_bound", "l1_bound", "boundary_leak"});
    report.row({std::to_string(episodes), std::to_string(horizon), format_double(kernel.bandwidth),
                format_double(model.integrate()), format_double(kde_bias_bound(kernel)),
                format_double(kde_l1_bound(kernel, cont.state_volume(), cont.action_measure, episodes, delta)),
                model.boundary_leak() ? "1" : "0"});
    report.save(opts.out / "estimate_report.csv");
    write_metadata(opts, "estimate");
    return kSuccess;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Online RL with passive memory: solvers, estimators, online runs and audits", "passive_rl"};
    app.require_subcommand(1);
    struct Raw {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::string mdp, memory;
        std::optional<double> eta;
        std::optional<int> max_iters;
    } raw;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "Solve the regularized dual for one MDP and memory"},
        {"online", "Run the online mirror-descent learner"},
        {"sweep", "Sweep one parameter of the online learner over seeds"},
        {"lowerbound", "Audit the lower-bound instance pair and the history KL identity"},
        {"validate-kernel", "Check a smoothing kernel and report its moment constant"},
        {"estimate", "Estimate an occupancy from rollouts and report error bounds"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", raw.config, "Configuration file (key = value with [section] headers)");
        sub->add_option("--out", raw.out, "Output directory")->required();
        sub->add_option("--seed", raw.seed, "Master seed (overrides the config)");
        subs[name] = sub;
    }
    subs["solve"]->add_option("--mdp", raw.mdp, "MDP file or builtin:<name>");
    subs["solve"]->add_option("--memory", raw.memory, "uniform, optimal, mixture:<alpha> or an occupancy CSV");
    subs["solve"]->add_option("--eta", raw.eta, "Reward scale");
    subs["solve"]->add_option("--max-iters", raw.max_iters, "Iteration cap");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kInvalid;
    }

    try {
        CommonOptions opts;
        if (!raw.config.empty()) opts.config = Config::load(raw.config);
        opts.seed = raw.seed ? *raw.seed : opts.config.get_u64("", "seed", 1);
        opts.config.require_known("", {"seed"});
        opts.out = raw.out;
        if (!raw.mdp.empty()) opts.config.set("solve", "mdp", raw.mdp);
        if (!raw.memory.empty()) opts.config.set("solve", "memory", raw.memory);
        if (raw.eta) opts.config.set("solve", "eta", format_double(*raw.eta));
        if (raw.max_iters) opts.config.set("solve", "max_iters", std::to_string(*raw.max_iters));

        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            if (name == "solve") return cmd_solve(opts);
            if (name == "online") return cmd_online(opts);
            if (name == "sweep") return cmd_sweep(opts);
            if (name == "lowerbound") return cmd_lowerbound(opts);
            if (name == "validate-kernel") return cmd_validate_kernel(opts);
            if (name == "estimate") return cmd_estimate(opts);
        }
        return kInvalid;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}

int run_cli(int argc, char** argv) { return run_cli(std::vector<std::string>(argv, argv + argc)); }

} // namespace passive_rl::cli
