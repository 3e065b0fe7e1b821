#pragma once

#include "config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace passive_rl::cli {

enum ExitCode : int { kSuccess = 0, kInvalid = 1, kNotConverged = 2 };

struct CommonOptions {
    Config config;
    std::filesystem::path out;
    std::uint64_t seed = 1;
};

/// Each command validates its whole configuration before computing, writes its CSVs
/// (atomically) under opts.out and returns an exit code. Validation and parse problems
/// surface as exceptions; run_cli maps them to exit codes.
int cmd_solve(const CommonOptions& opts);
int cmd_online(const CommonOptions& opts);
int cmd_sweep(const CommonOptions& opts);
int cmd_lowerbound(const CommonOptions& opts);
int cmd_validate_kernel(const CommonOptions& opts);
int cmd_estimate(const CommonOptions& opts);

/// Full command line including the program name.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

} // namespace passive_rl::cli
