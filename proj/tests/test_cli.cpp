#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hsgrowth/cli.hpp"

namespace fs = std::filesystem;
using hsgrowth::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hsgrowth_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_path(const std::string& name) {
  return (fs::path(HSGROWTH_CONFIG_DIR) / name).string();
}

int count_prefixed(const fs::path& dir, const std::string& prefix) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().starts_with(prefix)) ++count;
  }
  return count;
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const Result r = invoke({});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, HelpExitsCleanly) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("reproduce"), std::string::npos);
}

TEST(Cli, RunWithoutConfigPrintsUsage) {
  const Result r = invoke({"run"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--config"), std::string::npos);
}

TEST(Cli, RunWithMissingConfigFile) {
  const Result r = invoke({"run", "--config", "/nonexistent/none.cfg"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Cli, RunWritesFrames) {
  const fs::path dir = fresh_dir("run");
  const Result r = invoke({"run", "--config", config_path("gauss1.cfg"), "--set", "n_cells=20",
                           "--set", "t_end=0.2", "--set", "output_every=5", "--output-dir",
                           dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "diag.csv"));
  EXPECT_TRUE(fs::exists(dir / "n_00000000.csv"));
  EXPECT_GE(count_prefixed(dir, "n_"), 2);
  EXPECT_EQ(count_prefixed(dir, "n_"), count_prefixed(dir, "W_"));
  EXPECT_NE(r.out.find("completed"), std::string::npos);
}

TEST(Cli, ZeroEndTimeGivesSingleFrame) {
  const fs::path dir = fresh_dir("t0");
  const Result r = invoke({"run", "-c", config_path("gauss2.cfg"), "--set", "t_end=0",
                           "--set", "n_cells=16", "-o", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_prefixed(dir, "n_"), 1);
}

TEST(Cli, BadOverrideIsUsageError) {
  const Result r = invoke({"run", "-c", config_path("gauss1.cfg"), "--set", "colour=red"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Cli, NumericalFailureExitCode) {
  const fs::path dir = fresh_dir("numerical");
  const Result r = invoke({"run", "-c", config_path("uniform.cfg"), "--set",
                           "init=custom:(0.5 + 0.1*cos(2*pi*x))^(1/3)", "--set",
                           "quadrature=midpoint", "--set", "max_iterations=2", "-o",
                           dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(dir / "FAILED"));
}

TEST(Cli, OutputDirFromEnvironment) {
  const fs::path dir = fresh_dir("env");
  ::setenv(hsgrowth::cli::kOutputDirEnv, dir.string().c_str(), 1);
  const Result r = invoke({"run", "-c", config_path("uniform.cfg"), "--set", "t_end=0"});
  ::unsetenv(hsgrowth::cli::kOutputDirEnv);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "n_00000000.csv"));
}

TEST(Cli, VerifyDefaultPasses) {
  const Result r = invoke({"verify"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL "), std::string::npos);
}

TEST(Cli, VerifyInjectedFaultFails) {
  const Result r = invoke({"verify", "--inject-fault"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyRefusesLargeDenseOracle) {
  const Result r = invoke({"verify", "--sizes", "48"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dense"), std::string::npos);
}

TEST(Cli, VerifyLargeWithoutDense) {
  const Result r = invoke({"verify", "--sizes", "8,40", "--no-dense", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, ConvergeWritesTable) {
  const fs::path dir = fresh_dir("converge");
  const Result r = invoke({"converge", "-c", config_path("uniform.cfg"), "--levels", "3",
                           "--t-snapshot", "0.25", "-o", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "convergence.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "h,l1_difference,rate");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, ConvergeNeedsThreeLevels) {
  const Result r = invoke({"converge", "-c", config_path("uniform.cfg"), "--levels", "2",
                           "--t-snapshot", "0.25", "-o", fresh_dir("converge2").string()});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, ReproduceUnknownFigure) {
  const Result r = invoke({"reproduce", "fig9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("fig9"), std::string::npos);
}

TEST(Cli, ReproduceWritesFourFrames) {
  const fs::path dir = fresh_dir("reproduce");
  const Result r = invoke({"reproduce", "fig1", "--scale", "16", "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_prefixed(dir, "n_"), 4);
  EXPECT_NE(r.out.find("wrote 4 frames"), std::string::npos);
}
