#pragma once

// Time stepping, run driver with file output, grid restriction, convergence
// studies and the figure reproduction presets.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hsgrowth/brinkman.hpp"
#include "hsgrowth/config.hpp"
#include "hsgrowth/errors.hpp"
#include "hsgrowth/frame_io.hpp"
#include "hsgrowth/grid.hpp"
#include "hsgrowth/invariants.hpp"
#include "hsgrowth/transport.hpp"

namespace hsgrowth {

/// Scheme variables at one time level. W and p always belong to n.
struct SimState {
  double t = 0.0;
  long step = 0;
  ScalarField n;
  ScalarField W;
  ScalarField p;
  double last_dt = 0.0;
  double last_n_max = 0.0;
  int cg_iterations = 0;
  double solver_residual = 0.0;
};

struct StepRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double min_n = 0.0;
  double max_n = 0.0;
  double max_W = 0.0;
  int cg_iters = 0;
  double n_max = 0.0;
  std::vector<InvariantReport> reports;

  const InvariantReport* report(std::string_view name) const {
    for (const auto& r : reports) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

struct Diagnostics {
  std::vector<StepRecord> records;
  /// Failed checks whose hypotheses hold in the configured CFL mode.
  std::vector<std::string> failures;
  /// Failed checks the configured mode does not guarantee.
  std::vector<std::string> warnings;
};

struct StepOutcome {
  SimState state;
  StepRecord record;
};

inline SimState init_state(const SimConfig& cfg) {
  cfg.validate();
  const GridSpec grid = cfg.grid();
  ScalarField n = cell_average_init(cfg.init.function(), grid, cfg.quadrature);
  ScalarField p = pressure(n, cfg.params);
  EllipticSolution sol = solve_brinkman(p, cfg.params.mu(), cfg.bc, cfg.elliptic);
  const double n_max = certified_n_max(0.0, cfg.params, n.max());
  return SimState{0.0,          0,       std::move(n),     std::move(sol.W),
                  std::move(p), grid.h,  n_max,            sol.iterations,
                  sol.final_residual};
}

namespace detail {

inline bool check_asserted(const std::string& name, CflMode mode) {
  if (name == "density_bounds") return is_strict(mode);
  if (name == "entropy_l2") return mode == CflMode::StrictLemma43;
  return true;
}

}  // namespace detail

/// Advances one step, landing exactly on t_stop if the CFL step would pass
/// it. Order: velocities from W^m, dt, density update, p^{m+1}, W^{m+1}.
inline StepOutcome advance(const SimState& s, const SimConfig& cfg,
                           double t_stop) {
  const ModelParams& params = cfg.params;
  const double h = s.n.h();
  const FaceVelocities vel = face_velocities(s.W, cfg.bc);
  const double n_peak = s.n.max();
  CflResult cfl = cfl_dt(vel, params, cfg.cfl, h,
                         s.last_dt > 0.0 ? s.last_dt : h, n_peak);
  bool landed = false;
  if (s.t + cfl.dt >= t_stop) {
    cfl.dt = t_stop - s.t;
    cfl.n_max = certified_n_max(cfl.dt, params, n_peak);
    landed = true;
  }

  ScalarField n_new =
      transport_step(s.n, vel, s.p, cfl.dt, params, cfg.bc, cfg.cfl.mode);
  ScalarField p_new = pressure(n_new, params);
  EllipticSolution sol =
      solve_brinkman(p_new, params.mu(), cfg.bc, cfg.elliptic, s.W);

  StepOutcome out{SimState{landed ? t_stop : s.t + cfl.dt, s.step + 1,
                           std::move(n_new), std::move(sol.W),
                           std::move(p_new), cfl.dt, cfl.n_max,
                           sol.iterations, sol.final_residual},
                  StepRecord{}};
  const SimState& ns = out.state;
  StepRecord& rec = out.record;
  rec.step = ns.step;
  rec.t = ns.t;
  rec.dt = cfl.dt;
  rec.mass = h * h * ns.n.sum();
  rec.min_n = ns.n.min();
  rec.max_n = ns.n.max();
  rec.max_W = ns.W.max();
  rec.cg_iters = sol.iterations;
  rec.n_max = cfl.n_max;
  if (cfg.check_invariants) {
    rec.reports.push_back(check_mass_balance(s.n, ns.n, s.p, cfl.dt, params));
    rec.reports.push_back(
        check_entropy_l2(s.n, ns.n, s.W, s.p, cfl.dt, params, cfg.bc));
    rec.reports.push_back(check_density_bounds(ns.n, cfl.n_max));
    rec.reports.push_back(
        check_potential_bounds(ns.W, ns.p, ns.solver_residual));
  }
  return out;
}

inline SimState step(const SimState& s, const SimConfig& cfg) {
  return advance(s, cfg, cfg.t_end).state;
}

inline constexpr const char* kDiagnosticsHeader =
    "step,t,dt,mass,min_n,max_n,max_W,cg_iters,mass_residual,"
    "entropy_residual,bounds_residual";

inline std::string diagnostics_row(const StepRecord& r) {
  auto residual = [&](std::string_view name) {
    const InvariantReport* rep = r.report(name);
    return rep ? format_real(rep->residual) : std::string("nan");
  };
  return std::to_string(r.step) + ',' + format_real(r.t) + ',' +
         format_real(r.dt) + ',' + format_real(r.mass) + ',' +
         format_real(r.min_n) + ',' + format_real(r.max_n) + ',' +
         format_real(r.max_W) + ',' + std::to_string(r.cg_iters) + ',' +
         residual("mass_balance") + ',' + residual("entropy_l2") + ',' +
         residual("density_bounds");
}

struct RunResult {
  SimState state;
  Diagnostics diagnostics;
  std::vector<std::filesystem::path> frames;
};

namespace detail {

inline void write_state_frames(const std::filesystem::path& dir,
                               const SimState& s,
                               std::vector<std::filesystem::path>& written) {
  const std::pair<const char*, const ScalarField*> fields[] = {
      {"n", &s.n}, {"W", &s.W}, {"p", &s.p}};
  for (const auto& [name, field] : fields) {
    const auto path = dir / frame_filename(name, s.step);
    write_frame_file(path, *field, s.t, name);
    if (std::string_view(name) == "n") written.push_back(path);
  }
}

}  // namespace detail

/// Runs to cfg.t_end. Frames go to cfg.output_dir (none if empty) at t = 0,
/// every output_every steps, at each of `stop_times` (landed on exactly) and
/// at t_end. On a numerical failure the last good state is written together
/// with a FAILED marker before the error propagates.
inline RunResult run(const SimConfig& cfg, std::vector<double> stop_times = {}) {
  cfg.validate();
  std::sort(stop_times.begin(), stop_times.end());
  const bool writing = !cfg.output_dir.empty();
  const std::filesystem::path dir = cfg.output_dir;
  std::ofstream diag;
  std::vector<std::filesystem::path> frames;
  if (writing) {
    std::filesystem::create_directories(dir);
    std::filesystem::remove(dir / "FAILED");
    diag.open(dir / "diag.csv");
    if (!diag) throw Error("cannot write " + (dir / "diag.csv").string());
    diag << kDiagnosticsHeader << '\n';
  }

  SimState state = init_state(cfg);
  Diagnostics diagnostics;
  if (writing) detail::write_state_frames(dir, state, frames);

  try {
    while (state.t < cfg.t_end) {
      double t_stop = cfg.t_end;
      bool at_stop_time = false;
      for (double ts : stop_times) {
        if (ts > state.t && ts < t_stop) t_stop = ts;
      }
      StepOutcome outcome = advance(state, cfg, t_stop);
      at_stop_time = outcome.state.t == t_stop;
      for (const auto& rep : outcome.record.reports) {
        if (rep.passed() || !rep.applicable()) continue;
        const std::string msg = "step " + std::to_string(outcome.record.step) +
                                ": " + rep.name + " residual " +
                                format_real(rep.residual) + " > " +
                                format_real(rep.tolerance);
        if (detail::check_asserted(rep.name, cfg.cfl.mode)) {
          diagnostics.failures.push_back(msg);
        } else {
          diagnostics.warnings.push_back(msg);
        }
      }
      if (writing) diag << diagnostics_row(outcome.record) << '\n';
      diagnostics.records.push_back(std::move(outcome.record));
      state = std::move(outcome.state);

      const bool scheduled =
          cfg.output_every > 0 && state.step % cfg.output_every == 0;
      const bool requested =
          at_stop_time && std::find(stop_times.begin(), stop_times.end(),
                                    state.t) != stop_times.end();
      if (writing && (scheduled || requested || state.t >= cfg.t_end)) {
        detail::write_state_frames(dir, state, frames);
      }
    }
  } catch (const NumericalError& e) {
    if (writing) {
      diag.flush();
      if (frames.empty() || frames.back().filename() !=
                                frame_filename("n", state.step)) {
        detail::write_state_frames(dir, state, frames);
      }
      std::ofstream marker(dir / "FAILED");
      marker << "step " << state.step << " t=" << format_real(state.t) << ": "
             << e.what() << '\n';
    }
    throw;
  }
  return RunResult{std::move(state), std::move(diagnostics), std::move(frames)};
}

/// Block average over factor x factor cell groups.
inline ScalarField restrict_field(const ScalarField& fine, int factor) {
  if (factor < 1 || fine.n() % factor != 0 || fine.n() / factor < 2) {
    throw IncompatibleGrids("cannot restrict " + std::to_string(fine.n()) +
                            " cells by a factor of " + std::to_string(factor));
  }
  const GridSpec& g = fine.grid();
  const GridSpec coarse = GridSpec::make(g.lo, g.hi, g.n_cells / factor);
  ScalarField out(coarse);
  const double weight = 1.0 / (static_cast<double>(factor) * factor);
  for (int j = 1; j <= fine.n(); ++j) {
    for (int i = 1; i <= fine.n(); ++i) {
      out((i - 1) / factor + 1, (j - 1) / factor + 1) += weight * fine(i, j);
    }
  }
  return out;
}

struct ConvergenceRow {
  /// Mesh width of the coarser grid in the compared pair.
  double h = 0.0;
  /// ||restrict(n_{h/2}) - n_h||_{L1}.
  double l1_difference = 0.0;
  /// log2(e_k / e_{k+1}); NaN on the last row.
  double rate = std::numeric_limits<double>::quiet_NaN();
};

/// Runs cfg at n_cells * 2^k, k = 0..levels-1, up to t_snapshot and compares
/// consecutive levels on the coarser grid. A finite max_dt is refined along
/// with h.
inline std::vector<ConvergenceRow> convergence_study(const SimConfig& cfg,
                                                     int levels,
                                                     double t_snapshot) {
  if (levels < 3) throw ConfigError("a convergence study needs >= 3 levels");
  std::vector<ScalarField> snapshots;
  for (int k = 0; k < levels; ++k) {
    SimConfig level = cfg;
    level.n_cells = cfg.n_cells << k;
    level.cfl.max_dt = std::ldexp(cfg.cfl.max_dt, -k);
    level.t_end = t_snapshot;
    level.output_dir.clear();
    snapshots.push_back(run(level).state.n);
  }
  std::vector<ConvergenceRow> rows;
  for (int k = 0; k + 1 < levels; ++k) {
    const ScalarField restricted = restrict_field(snapshots[k + 1], 2);
    const ScalarField& coarse = snapshots[k];
    double diff = 0.0;
    for (std::size_t c = 0; c < coarse.values().size(); ++c) {
      diff += std::abs(restricted.values()[c] - coarse.values()[c]);
    }
    rows.push_back({coarse.h(), diff * coarse.h() * coarse.h()});
  }
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    rows[k].rate = std::log2(rows[k].l1_difference / rows[k + 1].l1_difference);
  }
  return rows;
}

/// Preset for one of the two reproduction figures: the run configuration and
/// the snapshot times.
struct FigurePreset {
  SimConfig config;
  std::vector<double> times;
};

/// "fig1": single Gaussian, p = n^3, frames at t = 0, 1, 2, 4.
/// "fig2": two Gaussians, p = n^10, frames at t = 0, 2, 4, 6.
/// Both use [-2.5, 2.5]^2, mu = 1, G(p) = 1 - p, Neumann conditions and
/// h = scale / 64.
inline FigurePreset figure_preset(const std::string& figure, int scale) {
  constexpr int kFinestCells = 320;
  if (scale < 1 || kFinestCells % scale != 0) {
    throw ConfigError("scale factor must be >= 1 and divide " +
                      std::to_string(kFinestCells));
  }
  FigurePreset preset;
  SimConfig& cfg = preset.config;
  cfg.lo = -2.5;
  cfg.hi = 2.5;
  cfg.n_cells = kFinestCells / scale;
  cfg.bc = BoundaryCondition::Neumann;
  cfg.cfl.mode = CflMode::StrictLemma41;
  if (figure == "fig1") {
    cfg.params = ModelParams(1.0, 1.0, 3.0, 1.0, 1.0, 1.0);
    cfg.init = InitialData::gaussian1();
    preset.times = {0.0, 1.0, 2.0, 4.0};
  } else if (figure == "fig2") {
    cfg.params = ModelParams(1.0, 1.0, 10.0, 1.0, 1.0, 1.0);
    cfg.init = InitialData::gaussian2();
    preset.times = {0.0, 2.0, 4.0, 6.0};
  } else {
    throw ConfigError("unknown figure '" + figure + "' (expected fig1 or fig2)");
  }
  cfg.t_end = preset.times.back();
  cfg.output_every = 0;
  return preset;
}

/// Random sum of 1-4 Gaussian bumps scaled so that its maximum lies in
/// [0.3, 1] * peak. Used by property tests and the verifier.
template <class Rng>
ScalarField random_gaussian_mixture(const GridSpec& grid, Rng& rng,
                                    double peak) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double length = grid.hi - grid.lo;
  const int bumps = 1 + static_cast<int>(unit(rng) * 4.0) % 4;
  struct Bump {
    double cx, cy, sharpness, amplitude;
  };
  std::vector<Bump> list;
  for (int b = 0; b < bumps; ++b) {
    list.push_back({grid.lo + length * (0.2 + 0.6 * unit(rng)),
                    grid.lo + length * (0.2 + 0.6 * unit(rng)),
                    (20.0 + 180.0 * unit(rng)) / (length * length),
                    0.2 + 0.8 * unit(rng)});
  }
  ScalarField f = cell_average_init(
      [&](double x, double y) {
        double s = 0.0;
        for (const auto& b : list) {
          const double r2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
          s += b.amplitude * std::exp(-b.sharpness * r2);
        }
        return s;
      },
      grid);
  const double target = peak * (0.3 + 0.7 * unit(rng));
  const double scale = target / f.max();
  for (double& x : f.values()) x *= scale;
  return f;
}

}  // namespace hsgrowth
