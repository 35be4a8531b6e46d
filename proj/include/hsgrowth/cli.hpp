#pragma once

// Command-line front end: run, verify, converge, reproduce.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "hsgrowth/config.hpp"
#include "hsgrowth/errors.hpp"
#include "hsgrowth/frame_io.hpp"
#include "hsgrowth/sim.hpp"
#include "hsgrowth/verify.hpp"

namespace hsgrowth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

inline constexpr const char* kOutputDirEnv = "HSGROWTH_OUTPUT_DIR";

inline std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env != nullptr && *env != '\0' ? env : "out";
}

namespace detail {

inline SimConfig build_config(const std::string& config_path,
                              const std::vector<std::string>& overrides,
                              const std::string& output_dir) {
  SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
  for (const auto& o : overrides) apply_override(cfg, o);
  if (!output_dir.empty()) {
    cfg.output_dir = output_dir;
  } else if (cfg.output_dir.empty()) {
    cfg.output_dir = default_output_dir();
  }
  cfg.validate();
  return cfg;
}

inline int report_run(const RunResult& result, const SimConfig& cfg,
                      std::ostream& out, std::ostream& err) {
  out << "completed " << result.state.step << " steps to t="
      << format_real(result.state.t) << "\n";
  out << "wrote " << result.frames.size() << " frames to " << cfg.output_dir
      << "\n";
  for (const auto& w : result.diagnostics.warnings) {
    out << "warning: " << w << "\n";
  }
  if (!result.diagnostics.failures.empty()) {
    for (const auto& f : result.diagnostics.failures) {
      err << "invariant failure: " << f << "\n";
    }
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace detail

/// Runs the front end on `args` (program name excluded).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Explicit finite-difference simulator for Hele-Shaw tumor growth "
               "with a Brinkman potential",
               "hsgrowth"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;

  auto* run_cmd = app.add_subcommand("run", "Run a simulation from a config file");
  run_cmd->add_option("--config,-c", config_path, "Config file")->required();
  run_cmd->add_option("--set", overrides, "Override key=value");
  run_cmd->add_option("--output-dir,-o", output_dir, "Output directory");

  VerifyOptions verify_opts;
  bool no_dense = false;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check solver and discrete estimates");
  verify_cmd->add_option("--seed", verify_opts.seed, "Random seed");
  verify_cmd->add_option("--sizes", verify_opts.sizes, "Grid sizes")
      ->delimiter(',');
  verify_cmd->add_flag("--no-dense", no_dense, "Skip the dense oracle");
  verify_cmd->add_flag("--inject-fault", verify_opts.inject_fault)
      ->group("");

  int levels = 3;
  double t_snapshot = 0.0;
  auto* converge_cmd =
      app.add_subcommand("converge", "Self-convergence study under refinement");
  converge_cmd->add_option("--config,-c", config_path, "Config file")->required();
  converge_cmd->add_option("--levels", levels, "Number of grids (>= 3)");
  converge_cmd->add_option("--t-snapshot", t_snapshot, "Comparison time")
      ->required();
  converge_cmd->add_option("--set", overrides, "Override key=value");
  converge_cmd->add_option("--output-dir,-o", output_dir, "Output directory");

  std::string figure;
  int scale = 1;
  auto* reproduce_cmd =
      app.add_subcommand("reproduce", "Recompute the frames of a reference figure");
  reproduce_cmd->add_option("figure", figure, "fig1 or fig2")->required();
  reproduce_cmd->add_option("--out-dir,-o", output_dir, "Output directory");
  reproduce_cmd->add_option("--scale", scale,
                            "Coarsening factor: h = scale/64");
  reproduce_cmd->add_option("--set", overrides, "Override key=value");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    const CLI::App* failing = app.get_subcommands().empty()
                                  ? &app
                                  : app.get_subcommands().front();
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const SimConfig cfg = detail::build_config(config_path, overrides, output_dir);
      const RunResult result = run(cfg);
      return detail::report_run(result, cfg, out, err);
    }

    if (verify_cmd->parsed()) {
      verify_opts.dense_oracle = !no_dense;
      const auto rows = verify_suite(verify_opts);
      bool all = true;
      out << std::left << std::setw(20) << "check" << std::setw(6) << "size"
          << std::setw(10) << "bc" << std::setw(26) << "residual"
          << std::setw(26) << "tolerance" << "status\n";
      for (const auto& r : rows) {
        all = all && r.passed;
        out << std::left << std::setw(20) << r.check << std::setw(6) << r.size
            << std::setw(10) << r.bc << std::setw(26) << format_real(r.residual)
            << std::setw(26) << format_real(r.tolerance)
            << (r.passed ? "PASS" : "FAIL") << "\n";
      }
      out << (all ? "all checks passed" : "some checks FAILED") << "\n";
      return all ? kExitOk : kExitNumerical;
    }

    if (converge_cmd->parsed()) {
      const SimConfig cfg = detail::build_config(config_path, overrides, output_dir);
      const auto rows = convergence_study(cfg, levels, t_snapshot);
      std::filesystem::create_directories(cfg.output_dir);
      const auto path = std::filesystem::path(cfg.output_dir) / "convergence.csv";
      std::ofstream file(path);
      if (!file) throw Error("cannot write " + path.string());
      file << "h,l1_difference,rate\n";
      for (const auto& r : rows) {
        file << format_real(r.h) << ',' << format_real(r.l1_difference) << ','
             << format_real(r.rate) << '\n';
      }
      out << "wrote " << rows.size() << " rows to " << path.string() << "\n";
      return kExitOk;
    }

    if (reproduce_cmd->parsed()) {
      FigurePreset preset = figure_preset(figure, scale);
      for (const auto& o : overrides) apply_override(preset.config, o);
      preset.config.output_dir =
          output_dir.empty() ? default_output_dir() + "/" + figure : output_dir;
      preset.config.validate();
      const RunResult result = run(preset.config, preset.times);
      return detail::report_run(result, preset.config, out, err);
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hsgrowth::cli
