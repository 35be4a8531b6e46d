#pragma once

// Square cell-centered grids, face fields and the finite-difference operators
// D^+, D^-, the 5-point Laplacian and cell averaging.
//
// Logical cell indices are 1-based: i, j in 1..N. Ghost indices 0 and N+1 are
// resolved on the fly from the boundary condition, no halo is stored.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsgrowth/errors.hpp"

namespace hsgrowth {

enum class BoundaryCondition { Neumann, Periodic };

enum class Axis { X = 1, Y = 2 };

inline const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Neumann ? "neumann" : "periodic";
}

/// Square domain [lo, hi]^2 split into n_cells x n_cells cells of width h.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n_cells = 2;
  double h = 0.5;

  static GridSpec make(double lo, double hi, int n_cells) {
    if (n_cells < 2) {
      throw InitializationError("grid needs at least 2 cells per axis, got " +
                                std::to_string(n_cells));
    }
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
      throw InitializationError("grid bounds must be finite with hi > lo");
    }
    return GridSpec{lo, hi, n_cells, (hi - lo) / n_cells};
  }

  /// Midpoint coordinate of cell index k (1-based) along either axis.
  double center(int k) const { return lo + (k - 0.5) * h; }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_cells) * n_cells;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Resolves a logical index in 0..N+1 to a stored index in 1..N.
inline int resolve_ghost(int k, int n, BoundaryCondition bc) {
  if (k >= 1 && k <= n) return k;
  if (bc == BoundaryCondition::Periodic) return k < 1 ? k + n : k - n;
  return k < 1 ? 1 : n;
}

class ScalarField {
 public:
  explicit ScalarField(GridSpec grid, double value = 0.0)
      : grid_(grid), values_(grid.cell_count(), value) {}

  ScalarField(GridSpec grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.cell_count()) {
      throw IncompatibleGrids("field has " + std::to_string(values_.size()) +
                              " values, grid expects " +
                              std::to_string(grid_.cell_count()));
    }
  }

  const GridSpec& grid() const { return grid_; }
  int n() const { return grid_.n_cells; }
  double h() const { return grid_.h; }

  double& operator()(int i, int j) { return values_[offset(i, j)]; }
  double operator()(int i, int j) const { return values_[offset(i, j)]; }

  /// Value at (i, j) with i, j allowed to reach into the ghost layer.
  double ghosted(int i, int j, BoundaryCondition bc) const {
    const int n = grid_.n_cells;
    return (*this)(resolve_ghost(i, n, bc), resolve_ghost(j, n, bc));
  }

  /// Row-major storage: j outer, i inner.
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  double sum() const;
  bool all_finite() const;

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(j - 1) * grid_.n_cells + (i - 1);
  }

  GridSpec grid_;
  std::vector<double> values_;
};

/// Face-centered data: u at vertical faces (i+1/2, j), i in 0..N, j in 1..N,
/// and v at horizontal faces (i, j+1/2), i in 1..N, j in 0..N. Index i (resp.
/// j) names the face i+1/2 (resp. j+1/2).
class FaceField {
 public:
  explicit FaceField(GridSpec grid)
      : grid_(grid),
        u_(static_cast<std::size_t>(grid.n_cells + 1) * grid.n_cells, 0.0),
        v_(static_cast<std::size_t>(grid.n_cells + 1) * grid.n_cells, 0.0) {}

  const GridSpec& grid() const { return grid_; }
  int n() const { return grid_.n_cells; }

  double& u(int i, int j) { return u_[u_offset(i, j)]; }
  double u(int i, int j) const { return u_[u_offset(i, j)]; }
  double& v(int i, int j) { return v_[v_offset(i, j)]; }
  double v(int i, int j) const { return v_[v_offset(i, j)]; }

  std::span<double> u_values() { return u_; }
  std::span<const double> u_values() const { return u_; }
  std::span<double> v_values() { return v_; }
  std::span<const double> v_values() const { return v_; }

  /// max |value| over both components and all faces.
  double max_abs() const {
    double m = 0.0;
    for (double x : u_) m = std::max(m, std::abs(x));
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  std::size_t u_offset(int i, int j) const {
    return static_cast<std::size_t>(j - 1) * (grid_.n_cells + 1) + i;
  }
  std::size_t v_offset(int i, int j) const {
    return static_cast<std::size_t>(j) * grid_.n_cells + (i - 1);
  }

  GridSpec grid_;
  std::vector<double> u_;
  std::vector<double> v_;
};

using FaceVelocities = FaceField;
using FaceFluxes = FaceField;

inline double ScalarField::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : values_) m = std::min(m, x);
  return m;
}

inline double ScalarField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : values_) m = std::max(m, x);
  return m;
}

inline double ScalarField::sum() const {
  double s = 0.0;
  for (double x : values_) s += x;
  return s;
}

inline bool ScalarField::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.n_cells != b.n_cells || a.h != b.h) {
    throw IncompatibleGrids("fields live on different grids (" +
                            std::to_string(a.n_cells) + " vs " +
                            std::to_string(b.n_cells) + " cells)");
  }
}

/// Forward difference D^+ along `axis`.
inline ScalarField diff_plus(const ScalarField& f, Axis axis,
                             BoundaryCondition bc) {
  const int n = f.n();
  const double h = f.h();
  ScalarField out(f.grid());
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const double next = axis == Axis::X ? f.ghosted(i + 1, j, bc)
                                          : f.ghosted(i, j + 1, bc);
      out(i, j) = (next - f(i, j)) / h;
    }
  }
  return out;
}

/// Backward difference D^- along `axis`.
inline ScalarField diff_minus(const ScalarField& f, Axis axis,
                              BoundaryCondition bc) {
  const int n = f.n();
  const double h = f.h();
  ScalarField out(f.grid());
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      const double prev = axis == Axis::X ? f.ghosted(i - 1, j, bc)
                                          : f.ghosted(i, j - 1, bc);
      out(i, j) = (f(i, j) - prev) / h;
    }
  }
  return out;
}

namespace detail {

// Neighbor tables for one axis: plus[k], minus[k] are the 0-based stored
// indices of logical neighbors k+1 and k-1 of 0-based index k.
struct NeighborTable {
  std::vector<int> plus;
  std::vector<int> minus;

  NeighborTable(int n, BoundaryCondition bc) : plus(n), minus(n) {
    for (int k = 0; k < n; ++k) {
      plus[k] = resolve_ghost(k + 2, n, bc) - 1;
      minus[k] = resolve_ghost(k, n, bc) - 1;
    }
  }
};

// out = Laplacian(in), both of size n*n in row-major order. The arithmetic
// is ((f+ - f)/h - (f - f-)/h)/h per axis, so the result coincides bit for
// bit with D^+ D^- and D^- D^+ compositions.
inline void laplacian_into(std::span<const double> in, std::span<double> out,
                           int n, double h, const NeighborTable& nb) {
  for (int j = 0; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * n;
    const std::size_t row_up = static_cast<std::size_t>(nb.plus[j]) * n;
    const std::size_t row_dn = static_cast<std::size_t>(nb.minus[j]) * n;
    for (int i = 0; i < n; ++i) {
      const double c = in[row + i];
      const double dx =
          ((in[row + nb.plus[i]] - c) / h - (c - in[row + nb.minus[i]]) / h) /
          h;
      const double dy =
          ((in[row_up + i] - c) / h - (c - in[row_dn + i]) / h) / h;
      out[row + i] = dx + dy;
    }
  }
}

}  // namespace detail

/// Discrete Laplacian div_h^{+-} grad_h^{-+} (5-point stencil).
inline ScalarField laplacian(const ScalarField& f, BoundaryCondition bc) {
  ScalarField out(f.grid());
  detail::laplacian_into(f.values(), out.values(), f.n(), f.h(),
                         detail::NeighborTable(f.n(), bc));
  return out;
}

/// Backward-difference divergence of a face field: D_1^- F1 + D_2^- F2.
inline ScalarField face_divergence(const FaceField& faces) {
  const int n = faces.n();
  const double h = faces.grid().h;
  ScalarField out(faces.grid());
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      out(i, j) = (faces.u(i, j) - faces.u(i - 1, j)) / h +
                  (faces.v(i, j) - faces.v(i, j - 1)) / h;
    }
  }
  return out;
}

enum class Quadrature { GaussLegendre2x2, Midpoint };

/// Cell averages of `f` over every cell, approximated with a fixed tensor
/// quadrature rule.
inline ScalarField cell_average_init(
    const std::function<double(double, double)>& f, const GridSpec& grid,
    Quadrature rule = Quadrature::GaussLegendre2x2) {
  // Gauss-Legendre nodes on [-1/2, 1/2] relative to the cell width.
  const double g = 0.5 / std::sqrt(3.0);
  std::vector<double> offsets;
  if (rule == Quadrature::Midpoint) {
    offsets = {0.0};
  } else {
    offsets = {-g, g};
  }
  const double weight = 1.0 / static_cast<double>(offsets.size() * offsets.size());

  ScalarField out(grid);
  for (int j = 1; j <= grid.n_cells; ++j) {
    for (int i = 1; i <= grid.n_cells; ++i) {
      double acc = 0.0;
      for (double oy : offsets) {
        for (double ox : offsets) {
          const double x = grid.center(i) + ox * grid.h;
          const double y = grid.center(j) + oy * grid.h;
          const double value = f(x, y);
          if (!std::isfinite(value)) {
            throw InitializationError(
                "initial data is not finite at (" + std::to_string(x) + ", " +
                std::to_string(y) + ")");
          }
          acc += weight * value;
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace hsgrowth
