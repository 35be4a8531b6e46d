#pragma once

// Pressure law p = a|n|^gamma, growth law G(p) = alpha - beta p^theta, the
// stabilized face fluxes, the explicit density update and time-step control.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hsgrowth/errors.hpp"
#include "hsgrowth/grid.hpp"

namespace hsgrowth {

class ModelParams {
 public:
  ModelParams(double mu, double a, double gamma, double alpha, double beta,
              double theta)
      : mu_(mu), a_(a), gamma_(gamma), alpha_(alpha), beta_(beta),
        theta_(theta) {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(mu)) throw ConfigError("mu must be positive");
    if (!positive(a)) throw ConfigError("a must be positive");
    if (!(std::isfinite(gamma) && gamma >= 2.0)) {
      throw ConfigError("gamma must satisfy gamma >= 2");
    }
    if (!positive(alpha) || !positive(beta) || !positive(theta)) {
      throw ConfigError("alpha, beta and theta must be positive");
    }
    homeostatic_pressure_ = std::pow(alpha / beta, 1.0 / theta);
    n_inf_ = std::pow(homeostatic_pressure_ / a, 1.0 / gamma);
    s_star_ = maximize_density_growth();
  }

  /// Defaults of the first reproduction run: mu = 1, p = n^3, G = 1 - p.
  ModelParams() : ModelParams(1.0, 1.0, 3.0, 1.0, 1.0, 1.0) {}

  double mu() const { return mu_; }
  double a() const { return a_; }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double theta() const { return theta_; }

  /// P_M with G(P_M) = 0.
  double homeostatic_pressure() const { return homeostatic_pressure_; }
  /// Density at homeostatic pressure.
  double n_inf() const { return n_inf_; }
  /// max of G over nonnegative pressures.
  double growth_sup() const { return alpha_; }
  /// sup over s >= 0 of (s/a)^(1/gamma) G(s).
  double s_star() const { return s_star_; }

  double pressure_of(double n) const { return a_ * std::pow(std::abs(n), gamma_); }
  double growth_of(double p) const { return alpha_ - beta_ * std::pow(p, theta_); }

 private:
  // Golden-section search on [0, P_M]; the objective is unimodal there and
  // negative beyond P_M.
  double maximize_density_growth() const {
    auto objective = [this](double s) {
      return std::pow(s / a_, 1.0 / gamma_) * growth_of(s);
    };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = homeostatic_pressure_;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > 1e-12 * std::max(1.0, homeostatic_pressure_)) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = objective(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = objective(x1);
      }
    }
    return std::max(0.0, objective(0.5 * (lo + hi)));
  }

  double mu_, a_, gamma_, alpha_, beta_, theta_;
  double homeostatic_pressure_ = 0.0;
  double n_inf_ = 0.0;
  double s_star_ = 0.0;
};

enum class CflMode { StrictLemma41, StrictLemma43, PracticalLinear };

inline bool is_strict(CflMode mode) { return mode != CflMode::PracticalLinear; }

inline const char* to_string(CflMode mode) {
  switch (mode) {
    case CflMode::StrictLemma41: return "strict_lemma41";
    case CflMode::StrictLemma43: return "strict_lemma43";
    case CflMode::PracticalLinear: return "practical_linear";
  }
  return "?";
}

struct CflConfig {
  CflMode mode = CflMode::StrictLemma41;
  double safety = 0.9;
  double practical_number = 0.45;
  /// Optional cap on the step size; infinity disables it.
  double max_dt = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(safety > 0.0 && safety <= 1.0)) {
      throw ConfigError("CFL safety factor must lie in (0, 1]");
    }
    if (!(practical_number > 0.0)) {
      throw ConfigError("practical CFL number must be positive");
    }
    if (!(max_dt > 0.0)) throw ConfigError("max_dt must be positive");
  }
};

struct CflResult {
  double dt = 0.0;
  /// Density bound certified for a step of size dt.
  double n_max = 0.0;
};

inline ScalarField pressure(const ScalarField& n, const ModelParams& params) {
  ScalarField p(n.grid());
  auto in = n.values();
  auto out = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = params.pressure_of(in[k]);
  return p;
}

inline ScalarField growth(const ScalarField& p, const ModelParams& params) {
  ScalarField g(p.grid());
  auto in = p.values();
  auto out = g.values();
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = params.growth_of(in[k]);
  return g;
}

/// F1 = -u (n_L + n_R)/2 - (h/2)|u| D^+ n on vertical faces, F2 likewise on
/// horizontal faces; neighbors across the boundary come from the ghost rule.
inline FaceFluxes numerical_fluxes(const ScalarField& n,
                                   const FaceVelocities& vel,
                                   BoundaryCondition bc) {
  require_same_grid(n.grid(), vel.grid());
  const int size = n.n();
  const double h = n.h();
  FaceFluxes flux(n.grid());
  auto face_flux = [h](double speed, double left, double right) {
    return -speed * (left + right) / 2.0 -
           (h / 2.0) * std::abs(speed) * ((right - left) / h);
  };
  for (int j = 1; j <= size; ++j) {
    for (int i = 0; i <= size; ++i) {
      flux.u(i, j) = face_flux(vel.u(i, j), n.ghosted(i, j, bc),
                               n.ghosted(i + 1, j, bc));
    }
  }
  for (int j = 0; j <= size; ++j) {
    for (int i = 1; i <= size; ++i) {
      flux.v(i, j) = face_flux(vel.v(i, j), n.ghosted(i, j, bc),
                               n.ghosted(i, j + 1, bc));
    }
  }
  return flux;
}

/// Smallest density bound the L-infinity estimate certifies for a step of
/// size dt taken from a state whose maximum is current_max.
inline double certified_n_max(double dt, const ModelParams& params,
                              double current_max = 0.0) {
  return std::max(params.n_inf() + 4.0 * dt * params.s_star(), current_max);
}

/// Upper bound on dt for the given mode at face speed `max_speed`, assuming
/// the density stays below n_max. For PracticalLinear this is the linear
/// bound capped by the reaction terms of the strict bound.
inline double dt_bound(CflMode mode, double max_speed, const ModelParams& params,
                       double h, double n_max, double practical_number = 0.45) {
  const double inf = std::numeric_limits<double>::infinity();
  const double reaction =
      params.mu() / (4.0 * params.gamma() * params.a() *
                     std::pow(n_max, params.gamma()));
  const double transport = h / (8.0 * max_speed + h * params.growth_sup());
  switch (mode) {
    case CflMode::StrictLemma41:
      return std::min(transport, reaction);
    case CflMode::StrictLemma43: {
      const double entropy = max_speed > 0.0 ? h / (16.0 * max_speed) : inf;
      // The summed L2 entropy estimate also needs 2 dt <= h for the reaction
      // part of |D_t n|^2.
      return std::min({transport, reaction, entropy, h / 2.0});
    }
    case CflMode::PracticalLinear: {
      const double speed = std::max(max_speed, 1e-12);
      return std::min({practical_number * h / speed,
                       1.0 / params.growth_sup(), reaction});
    }
  }
  return 0.0;
}

/// Chooses the time step. Strict modes start from the bound evaluated at
/// n_max(dt_prev) and halve until dt satisfies the bound evaluated at its own
/// certified n_max.
inline CflResult cfl_dt(const FaceVelocities& vel, const ModelParams& params,
                        const CflConfig& cfg, double h, double dt_prev,
                        double current_max = 0.0) {
  cfg.validate();
  if (!(h > 0.0) || !(dt_prev > 0.0)) {
    throw ConfigError("cfl_dt needs h > 0 and dt_prev > 0");
  }
  const double speed = vel.max_abs();
  auto bound_at = [&](double dt) {
    return dt_bound(cfg.mode, speed, params, h,
                    certified_n_max(dt, params, current_max),
                    cfg.practical_number);
  };
  double dt = std::min(cfg.safety * bound_at(dt_prev), cfg.max_dt);
  while (dt > bound_at(dt)) dt *= 0.5;
  return CflResult{dt, certified_n_max(dt, params, current_max)};
}

/// One explicit update
///   n_new = n - dt (D_1^- F1 + D_2^- F2) + dt n G(p).
/// In strict modes a dt above the strict bound is refused.
inline ScalarField transport_step(const ScalarField& n,
                                  const FaceVelocities& vel,
                                  const ScalarField& p, double dt,
                                  const ModelParams& params,
                                  BoundaryCondition bc, CflMode mode) {
  require_same_grid(n.grid(), p.grid());
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("time step must be positive and finite");
  }
  const double h = n.h();
  if (is_strict(mode)) {
    const double bound = dt_bound(mode, vel.max_abs(), params, h,
                                  certified_n_max(dt, params, n.max()));
    if (dt > bound * (1.0 + 1e-12)) throw CflViolation(dt, bound);
  }

  const FaceFluxes flux = numerical_fluxes(n, vel, bc);
  const int size = n.n();
  ScalarField out(n.grid());
  for (int j = 1; j <= size; ++j) {
    for (int i = 1; i <= size; ++i) {
      const double divergence = (flux.u(i, j) - flux.u(i - 1, j)) / h +
                                (flux.v(i, j) - flux.v(i, j - 1)) / h;
      const double c = n(i, j);
      out(i, j) = c - dt * divergence + dt * c * params.growth_of(p(i, j));
    }
  }
  for (int j = 1; j <= size; ++j) {
    for (int i = 1; i <= size; ++i) {
      if (!std::isfinite(out(i, j))) {
        throw NonFiniteState("density became non-finite at cell (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             ")");
      }
    }
  }
  return out;
}

/// Coefficients of the update written as
///   n_new = (a1 + a2) n + b n_E + z n_W + e n_N + t n_S.
struct ConvexCoefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double east = 0.0;
  double west = 0.0;
  double north = 0.0;
  double south = 0.0;
};

inline ConvexCoefficients convex_coefficients(const FaceVelocities& vel,
                                              const ScalarField& p, double dt,
                                              const ModelParams& params, int i,
                                              int j) {
  const double h = p.h();
  const double ue = vel.u(i, j), uw = vel.u(i - 1, j);
  const double vn = vel.v(i, j), vs = vel.v(i, j - 1);
  const double r = dt / (2.0 * h);
  ConvexCoefficients c;
  c.alpha1 = 1.0 - r * ((std::abs(ue) + ue) + (std::abs(uw) - uw) +
                        (std::abs(vn) + vn) + (std::abs(vs) - vs));
  c.alpha2 = dt * params.growth_of(p(i, j)) + (dt / h) * (ue - uw + vn - vs);
  c.east = r * (ue + std::abs(ue));
  c.west = r * (std::abs(uw) - uw);
  c.north = r * (vn + std::abs(vn));
  c.south = r * (std::abs(vs) - vs);
  return c;
}

}  // namespace hsgrowth
