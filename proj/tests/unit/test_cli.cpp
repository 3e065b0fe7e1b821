#include "commands.hpp"

#include "passive_rl/csv.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace passive_rl;
namespace fs = std::filesystem;

namespace {

const std::string kData = PASSIVE_RL_DATA_DIR;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / "passive_rl_cli_test" / info->name();
        fs::remove_all(root_);
        fs::create_directories(root_);
    }

    fs::path write_config(const std::string& name, const std::string& text) {
        const auto path = root_ / name;
        std::ofstream(path) << text;
        return path;
    }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "passive_rl");
        return cli::run_cli(args);
    }

    static std::string slurp(const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    fs::path root_;
};

double column_mean(const CsvTable& table, const std::string& name) {
    std::size_t col = 0;
    while (table.header[col] != name) ++col;
    double sum = 0.0;
    for (const auto& row : table.rows) sum += std::stod(row[col]);
    return sum / table.rows.size();
}

} // namespace

TEST_F(CliTest, SolveWritesThreeCsvs) {
    const auto out = root_ / "solve";
    EXPECT_EQ(run({"solve", "--mdp", kData + "/two_state_cycle.mdp", "--memory", "uniform", "--out", out.string()}),
              0);
    EXPECT_TRUE(fs::exists(out / "solve_report.csv"));
    EXPECT_TRUE(fs::exists(out / "policy.csv"));
    EXPECT_TRUE(fs::exists(out / "occupancy.csv"));
    EXPECT_EQ(read_csv(out / "solve_report.csv").rows[0][3], "1");
}

TEST_F(CliTest, SolveMalformedFileIsInvalid) {
    const auto bad = write_config("bad.mdp", "states 2\nactions two\n");
    EXPECT_EQ(run({"solve", "--mdp", bad.string(), "--out", (root_ / "o").string()}), 1);
    EXPECT_EQ(run({"solve", "--mdp", (root_ / "missing.mdp").string(), "--out", (root_ / "o").string()}), 1);
}

TEST_F(CliTest, SolveIterationCapIsNonConvergence) {
    EXPECT_EQ(run({"solve", "--mdp", kData + "/benchmark_3x2.mdp", "--max-iters", "1", "--out",
                   (root_ / "o").string()}),
              2);
}

TEST_F(CliTest, SolveFromConfigFileResolvesRelativePaths) {
    fs::copy_file(kData + "/benchmark_2x2.mdp", root_ / "local.mdp");
    const auto cfg = write_config("solve.ini", "[solve]\nmdp = local.mdp\nmemory = mixture:0.5\neta = 2\n");
    EXPECT_EQ(run({"solve", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
}

TEST_F(CliTest, MissingSubcommandOrOutIsInvalid) {
    EXPECT_EQ(run({}), 1);
    EXPECT_EQ(run({"solve", "--mdp", "builtin:benchmark_2x2"}), 1);
    EXPECT_EQ(run({"frobnicate", "--out", "x"}), 1);
}

TEST_F(CliTest, UnknownConfigKeyIsInvalid) {
    const auto cfg = write_config("c.ini", "[online]\nmdp = builtin:benchmark_2x2\nroundz = 3\n");
    EXPECT_EQ(run({"online", "--config", cfg.string(), "--out", (root_ / "o").string()}), 1);
    const auto cfg2 = write_config("c2.ini", "[onlin]\nmdp = builtin:benchmark_2x2\n");
    EXPECT_EQ(run({"online", "--config", cfg2.string(), "--out", (root_ / "o").string()}), 1);
}

TEST_F(CliTest, OnlineSixteenRoundsCumulativeNondecreasing) {
    const auto cfg =
        write_config("c.ini", "seed = 4\n[online]\nmdp = " + kData + "/benchmark_2x2.mdp\nrounds = 16\nepisodes = 50\n");
    const auto out = root_ / "o";
    ASSERT_EQ(run({"online", "--config", cfg.string(), "--out", out.string()}), 0);
    const auto table = read_csv(out / "regret.csv");
    ASSERT_EQ(table.rows.size(), 16u);
    for (std::size_t t = 1; t < table.rows.size(); ++t)
        EXPECT_GE(std::stod(table.rows[t][2]), std::stod(table.rows[t - 1][2]));
    const auto meta = slurp(out / "run.csv");
    EXPECT_NE(meta.find("seed,4\n"), std::string::npos);
    EXPECT_NE(meta.find("command,online\n"), std::string::npos);
}

TEST_F(CliTest, OnlineRepeatsByteForByte) {
    const auto cfg = write_config("c.ini", "seed = 9\n[online]\nmdp = builtin:benchmark_3x2\nrounds = 10\n"
                                           "episodes = 40\nmemory = sampled:0.5:200\n");
    ASSERT_EQ(run({"online", "--config", cfg.string(), "--out", (root_ / "a").string()}), 0);
    ASSERT_EQ(run({"online", "--config", cfg.string(), "--out", (root_ / "b").string()}), 0);
    EXPECT_EQ(slurp(root_ / "a" / "regret.csv"), slurp(root_ / "b" / "regret.csv"));
    ASSERT_EQ(run({"online", "--config", cfg.string(), "--seed", "10", "--out", (root_ / "c").string()}), 0);
    EXPECT_NE(slurp(root_ / "a" / "regret.csv"), slurp(root_ / "c" / "regret.csv"));
    EXPECT_NE(slurp(root_ / "c" / "run.csv").find("seed,10\n"), std::string::npos);
}

TEST_F(CliTest, OptimalMemoryBeatsUniformMemory) {
    const std::string body = "[online]\nmdp = " + kData + "/benchmark_2x2.mdp\nrounds = 20\nepisodes = 50\n"
                                                           "seeds = 1, 2, 3, 4, 5\nmemory = ";
    const auto opt = write_config("opt.ini", body + "optimal\n");
    const auto uni = write_config("uni.ini", body + "uniform\n");
    ASSERT_EQ(run({"online", "--config", opt.string(), "--out", (root_ / "opt").string()}), 0);
    ASSERT_EQ(run({"online", "--config", uni.string(), "--out", (root_ / "uni").string()}), 0);
    const auto a = read_csv(root_ / "opt" / "seeds_summary.csv");
    const auto b = read_csv(root_ / "uni" / "seeds_summary.csv");
    ASSERT_EQ(a.rows.size(), 5u);
    EXPECT_TRUE(fs::exists(root_ / "opt" / "regret_seed3.csv"));
    EXPECT_LE(column_mean(a, "final_gap"), column_mean(b, "final_gap"));
}

TEST_F(CliTest, OnlineContinuousRuns) {
    const auto cfg = write_config("c.ini", "[online]\nmdp = builtin:random_walk\nrounds = 2\nepisodes = 20\n"
                                           "memory = sampled:50\ncells_per_dim = 5\nsamples_per_cell = 8\n"
                                           "eval_episodes = 100\nbandwidth = 0.15\n");
    ASSERT_EQ(run({"online", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    EXPECT_EQ(read_csv(root_ / "o" / "regret.csv").rows.size(), 2u);
}

TEST_F(CliTest, SweepMemoryAlphaThreeRows) {
    const auto cfg = write_config("s.ini", "[online]\nmdp = builtin:benchmark_2x2\nrounds = 4\nepisodes = 20\n"
                                           "[sweep]\naxis = memory_alpha\nvalues = 0, 0.5, 1\nseeds = 20\n"
                                           "memory_episodes = 100\n");
    ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    const auto summary = read_csv(root_ / "o" / "summary.csv");
    EXPECT_EQ(summary.rows.size(), 3u);
    EXPECT_EQ(read_csv(root_ / "o" / "point_2.csv").rows.size(), 20u);
}

TEST_F(CliTest, SweepRoundsReportsSlope) {
    const auto cfg = write_config("s.ini", "[online]\nmdp = builtin:benchmark_3x2\nepisodes = 20\n"
                                           "[sweep]\naxis = T\nvalues = 8, 16, 32\nseeds = 3\n");
    ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    const auto summary = read_csv(root_ / "o" / "summary.csv");
    ASSERT_EQ(summary.rows.size(), 3u);
    EXPECT_EQ(summary.header[6], "slope");
    EXPECT_FALSE(summary.rows[0][6].empty());
    EXPECT_EQ(summary.rows[0][6], summary.rows[2][6]);
}

TEST_F(CliTest, SweepRejectsEmptyOrUnknownAxis) {
    const auto empty = write_config("e.ini", "[online]\nmdp = builtin:benchmark_2x2\n[sweep]\naxis = T\nvalues =\n");
    EXPECT_EQ(run({"sweep", "--config", empty.string(), "--out", (root_ / "o").string()}), 1);
    const auto bad = write_config("b.ini", "[online]\nmdp = builtin:benchmark_2x2\n[sweep]\naxis = gamma\nvalues = 1\n");
    EXPECT_EQ(run({"sweep", "--config", bad.string(), "--out", (root_ / "o").string()}), 1);
    const auto frac = write_config("f.ini", "[online]\nmdp = builtin:benchmark_2x2\n[sweep]\naxis = T\nvalues = 2.5\n");
    EXPECT_EQ(run({"sweep", "--config", frac.string(), "--out", (root_ / "o").string()}), 1);
    EXPECT_FALSE(fs::exists(root_ / "o"));
}

TEST_F(CliTest, LowerboundAuditFlagsRows) {
    const auto cfg = write_config("l.ini", "[lowerbound]\ndelta = 0.1\nrounds = 10\nepisodes = 5\nseeds = 10\n"
                                           "kl_policies = 5\n");
    ASSERT_EQ(run({"lowerbound", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    const auto audit = read_csv(root_ / "o" / "pair_audit.csv");
    EXPECT_EQ(audit.header,
              (std::vector<std::string>{"seed", "R_m", "R_m_prime", "pair_sum", "lower_bound_value", "delta", "holds"}));
    ASSERT_EQ(audit.rows.size(), 10u);
    for (const auto& row : audit.rows)
        EXPECT_EQ(row[6], std::stod(row[3]) >= std::stod(row[4]) ? "1" : "0");
    const auto kl = read_csv(root_ / "o" / "kl_audit.csv");
    EXPECT_EQ(kl.rows.size(), 5u * 3u);
    for (const auto& row : kl.rows) EXPECT_LE(std::stod(row[4]), 1e-9);
}

TEST_F(CliTest, LowerboundIdenticalPairHasZeroKl) {
    const auto cfg = write_config("l.ini", "[lowerbound]\ndelta = 0\nrounds = 3\nepisodes = 2\nseeds = 2\n"
                                           "kl_policies = 4\nkl_horizon = 3\nmode = static\n");
    ASSERT_EQ(run({"lowerbound", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    for (const auto& row : read_csv(root_ / "o" / "kl_audit.csv").rows) {
        EXPECT_LE(std::abs(std::stod(row[2])), 1e-12);
        EXPECT_LE(std::abs(std::stod(row[3])), 1e-12);
    }
}

TEST_F(CliTest, LowerboundGuardIsInvalid) {
    const auto cfg = write_config("l.ini", "[lowerbound]\nkl_horizon = 12\n");
    ::testing::internal::CaptureStderr();
    const int code = run({"lowerbound", "--config", cfg.string(), "--out", (root_ / "o").string()});
    const auto err = ::testing::internal::GetCapturedStderr();
    EXPECT_EQ(code, 1);
    EXPECT_NE(err.find("enumeration guard"), std::string::npos) << err;
    EXPECT_FALSE(fs::exists(root_ / "o"));
}

TEST_F(CliTest, ValidateKernel) {
    const auto good = write_config("k.ini", "[kernel]\nname = epanechnikov\nbeta = 2\ndim = 1\n");
    ASSERT_EQ(run({"validate-kernel", "--config", good.string(), "--out", (root_ / "o").string()}), 0);
    EXPECT_NEAR(std::stod(read_csv(root_ / "o" / "kernel.csv").rows[0][3]), 0.2, 1e-12);
    const auto bad = write_config("b.ini", "[kernel]\nname = box2\n");
    ::testing::internal::CaptureStderr();
    EXPECT_EQ(run({"validate-kernel", "--config", bad.string(), "--out", (root_ / "b").string()}), 1);
    EXPECT_NE(::testing::internal::GetCapturedStderr().find("∫G ≠ 1"), std::string::npos);
}

TEST_F(CliTest, EstimateTabularAndContinuous) {
    const auto tab = write_config("t.ini", "[estimate]\nmdp = builtin:benchmark_2x2\nepisodes = 200\n");
    ASSERT_EQ(run({"estimate", "--config", tab.string(), "--out", (root_ / "t").string()}), 0);
    EXPECT_EQ(read_csv(root_ / "t" / "occupancy.csv").rows.size(), 4u);
    EXPECT_EQ(read_csv(root_ / "t" / "estimate_report.csv").rows.size(), 1u);
    const auto cont = write_config("c.ini", "[estimate]\nmdp = builtin:bump\nepisodes = 100\ngrid_points = 21\n");
    ASSERT_EQ(run({"estimate", "--config", cont.string(), "--out", (root_ / "c").string()}), 0);
    EXPECT_EQ(read_csv(root_ / "c" / "kde_grid.csv").rows.size(), 42u);
}

TEST_F(CliTest, WritesOnlyInsideOutputDirectory) {
    const auto cfg = write_config("k.ini", "[kernel]\nname = biweight\n");
    ASSERT_EQ(run({"validate-kernel", "--config", cfg.string(), "--out", (root_ / "o").string()}), 0);
    std::vector<std::string> top;
    for (const auto& e : fs::directory_iterator(root_)) top.push_back(e.path().filename().string());
    std::sort(top.begin(), top.end());
    EXPECT_EQ(top, (std::vector<std::string>{"k.ini", "o"}));
}
