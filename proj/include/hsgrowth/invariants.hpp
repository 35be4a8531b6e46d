#pragma once

// Checkers for the discrete a-priori estimates of the scheme. Each checker is
// a pure function of a state snapshot; all reductions run sequentially in
// row-major order so residuals are reproducible bit for bit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "hsgrowth/brinkman.hpp"
#include "hsgrowth/grid.hpp"
#include "hsgrowth/transport.hpp"

namespace hsgrowth {

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CellIndex {
  int i = 0;
  int j = 0;
};

struct InvariantReport {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  /// Signed margin; <= tolerance means satisfied.
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<CellIndex> location;

  bool passed() const { return status == CheckStatus::Pass; }
  bool applicable() const { return status != CheckStatus::NotApplicable; }
};

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kSolverChainTolerance = 1e-10;

namespace detail {

inline InvariantReport make_report(std::string name, double residual,
                                   double tolerance,
                                   std::optional<CellIndex> where = {}) {
  InvariantReport r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  r.location = where;
  return r;
}

inline double sum_squares(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values()) s += x * x;
  return s;
}

}  // namespace detail

/// 0 <= n <= n_max. Residual max(-min n, max n - n_max).
inline InvariantReport check_density_bounds(const ScalarField& n, double n_max) {
  double worst = -std::numeric_limits<double>::infinity();
  CellIndex where{1, 1};
  for (int j = 1; j <= n.n(); ++j) {
    for (int i = 1; i <= n.n(); ++i) {
      const double margin = std::max(-n(i, j), n(i, j) - n_max);
      if (margin > worst) {
        worst = margin;
        where = {i, j};
      }
    }
  }
  return detail::make_report("density_bounds", worst, kIdentityTolerance,
                             where);
}

/// min p <= W <= max p. The tolerance is the max-norm error a residual of
/// size solver_residual can cause; ||(I - mu Lap_h)^{-1}||_inf <= 1.
inline InvariantReport check_potential_bounds(const ScalarField& W,
                                              const ScalarField& p,
                                              double solver_residual = 0.0) {
  require_same_grid(W.grid(), p.grid());
  const double p_min = p.min();
  const double p_max = p.max();
  double worst = -std::numeric_limits<double>::infinity();
  CellIndex where{1, 1};
  for (int j = 1; j <= W.n(); ++j) {
    for (int i = 1; i <= W.n(); ++i) {
      const double margin = std::max(p_min - W(i, j), W(i, j) - p_max);
      if (margin > worst) {
        worst = margin;
        where = {i, j};
      }
    }
  }
  const double scale = std::max({std::abs(p_max), std::abs(p_min), 1e-300});
  const double tol = solver_residual + kIdentityTolerance * scale;
  return detail::make_report("potential_bounds", worst, tol, where);
}

/// h^2 sum n_new = h^2 sum n_old + dt h^2 sum n_old G(p_old).
inline InvariantReport check_mass_balance(const ScalarField& n_old,
                                          const ScalarField& n_new,
                                          const ScalarField& p_old, double dt,
                                          const ModelParams& params) {
  require_same_grid(n_old.grid(), n_new.grid());
  require_same_grid(n_old.grid(), p_old.grid());
  const double area = n_old.h() * n_old.h();
  double source = 0.0;
  auto n = n_old.values();
  auto p = p_old.values();
  for (std::size_t k = 0; k < n.size(); ++k) {
    source += n[k] * params.growth_of(p[k]);
  }
  const double mass_old = area * n_old.sum();
  const double mass_new = area * n_new.sum();
  const double defect = std::abs(mass_new - mass_old - dt * area * source);
  double magnitude = 0.0;
  for (double x : n) magnitude += std::abs(x);
  const double denom = std::max(area * magnitude, 1e-300);
  return detail::make_report("mass_balance", defect / denom,
                             kIdentityTolerance);
}

/// Summed L2 entropy inequality
///   h^2 (sum n_new^2 - sum n_old^2)/dt
///     <= h^2 sum n_old^2 (Lap_h W + 2 G(p)) + h^3 sum |n_old Lap_h W + n_old G(p)|^2.
/// Residual is LHS - RHS; the tolerance is 1e-10 times the magnitude of the
/// terms involved.
inline InvariantReport check_entropy_l2(const ScalarField& n_old,
                                        const ScalarField& n_new,
                                        const ScalarField& W_old,
                                        const ScalarField& p_old, double dt,
                                        const ModelParams& params,
                                        BoundaryCondition bc) {
  require_same_grid(n_old.grid(), n_new.grid());
  require_same_grid(n_old.grid(), W_old.grid());
  require_same_grid(n_old.grid(), p_old.grid());
  const double h = n_old.h();
  const ScalarField lap = laplacian(W_old, bc);
  auto n = n_old.values();
  auto nn = n_new.values();
  auto p = p_old.values();
  auto l = lap.values();

  double change = 0.0;
  double change_scale = 0.0;
  double production = 0.0;
  double production_scale = 0.0;
  double remainder = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    const double g = params.growth_of(p[k]);
    change += nn[k] * nn[k] - n[k] * n[k];
    change_scale += nn[k] * nn[k] + n[k] * n[k];
    production += n[k] * n[k] * (l[k] + 2.0 * g);
    production_scale += n[k] * n[k] * (std::abs(l[k]) + 2.0 * std::abs(g));
    const double r = n[k] * l[k] + n[k] * g;
    remainder += r * r;
  }
  const double lhs = h * h * change / dt;
  const double rhs = h * h * production + h * h * h * remainder;
  const double scale =
      std::max(h * h * change_scale / dt + h * h * production_scale +
                   h * h * h * remainder,
               1e-300);
  return detail::make_report("entropy_l2", lhs - rhs,
                             kSolverChainTolerance * scale);
}

/// mu^2 sum |grad^2_h W|^2 + 2 mu sum |grad_h W|^2 + sum W^2 = sum p^2 for a
/// solved W. Only meaningful under periodic conditions.
inline InvariantReport check_energy_identity(const ScalarField& W,
                                             const ScalarField& p, double mu,
                                             BoundaryCondition bc) {
  if (bc != BoundaryCondition::Periodic) {
    InvariantReport r;
    r.name = "energy_identity";
    r.status = CheckStatus::NotApplicable;
    r.tolerance = kSolverChainTolerance;
    return r;
  }
  require_same_grid(W.grid(), p.grid());
  using detail::sum_squares;
  const ScalarField dx = diff_plus(W, Axis::X, bc);
  const ScalarField dy = diff_plus(W, Axis::Y, bc);
  const ScalarField dxx = diff_minus(dx, Axis::X, bc);
  const ScalarField dyy = diff_minus(dy, Axis::Y, bc);
  const ScalarField dxy = diff_plus(dx, Axis::Y, bc);
  const double hessian = sum_squares(dxx) + sum_squares(dyy) + 2.0 * sum_squares(dxy);
  const double gradient = sum_squares(dx) + sum_squares(dy);
  const double lhs = mu * mu * hessian + 2.0 * mu * gradient + sum_squares(W);
  const double rhs = sum_squares(p);
  const double residual = std::abs(lhs - rhs) / std::max(rhs, 1e-300);
  return detail::make_report("energy_identity", residual,
                             kSolverChainTolerance);
}

}  // namespace hsgrowth
