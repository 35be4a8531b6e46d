#pragma once

// Self-check suite run by `hsgrowth verify`: iterative vs dense Brinkman
// solves, the potential maximum principle, the periodic energy identity and
// the per-step invariants along a short strict run.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hsgrowth/brinkman.hpp"
#include "hsgrowth/invariants.hpp"
#include "hsgrowth/sim.hpp"

namespace hsgrowth {

inline constexpr int kDenseOracleMaxSize = 32;

struct VerifyRow {
  std::string check;
  int size = 0;
  std::string bc;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  unsigned long long seed = 1;
  std::vector<int> sizes = {8, 16};
  bool dense_oracle = true;
  /// Test-only: corrupts solved potentials so that checks must fail.
  bool inject_fault = false;
};

inline std::vector<VerifyRow> verify_suite(const VerifyOptions& opt) {
  for (int n : opt.sizes) {
    if (n < 4) throw ConfigError("verify sizes must be >= 4");
    if (opt.dense_oracle && n > kDenseOracleMaxSize) {
      throw ConfigError("dense oracle requested for size " + std::to_string(n) +
                        " but is limited to N <= " +
                        std::to_string(kDenseOracleMaxSize) +
                        " (use --no-dense)");
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mus[] = {0.1, 1.0, 10.0};
  std::vector<VerifyRow> rows;
  auto add = [&](const std::string& check, int n, BoundaryCondition bc,
                 const InvariantReport& r) {
    rows.push_back({check, n, to_string(bc), r.residual, r.tolerance, r.passed()});
  };

  int mu_index = 0;
  for (int n : opt.sizes) {
    for (BoundaryCondition bc :
         {BoundaryCondition::Neumann, BoundaryCondition::Periodic}) {
      const double mu = mus[mu_index++ % 3];
      const GridSpec grid = GridSpec::make(-2.5, 2.5, n);
      ScalarField p(grid);
      for (double& x : p.values()) x = unit(rng);
      EllipticSolution sol = solve_brinkman(p, mu, bc);
      if (opt.inject_fault) sol.W(1, 1) += 1e-3 * (1.0 + p.max());

      if (opt.dense_oracle) {
        const ScalarField dense = solve_brinkman_dense(p, mu, bc);
        double diff = 0.0;
        for (std::size_t k = 0; k < dense.values().size(); ++k) {
          diff = std::max(diff, std::abs(dense.values()[k] - sol.W.values()[k]));
        }
        rows.push_back({"oracle_equivalence", n, to_string(bc), diff, 1e-10,
                        diff <= 1e-10});
      }
      add("potential_bounds", n, bc,
          check_potential_bounds(sol.W, p, sol.final_residual));
      if (bc == BoundaryCondition::Periodic) {
        add("energy_identity", n, bc, check_energy_identity(sol.W, p, mu, bc));
      }

      SimConfig cfg;
      cfg.lo = -2.5;
      cfg.hi = 2.5;
      cfg.n_cells = n;
      cfg.bc = bc;
      cfg.cfl.mode = CflMode::StrictLemma43;
      cfg.init = InitialData::uniform(0.0);
      SimState state = init_state(cfg);
      state.n = random_gaussian_mixture(cfg.grid(), rng, cfg.params.n_inf());
      state.p = pressure(state.n, cfg.params);
      state.W = solve_brinkman(state.p, cfg.params.mu(), bc).W;
      double worst[3] = {-1e300, -1e300, -1e300};
      double tol[3] = {0.0, 0.0, 0.0};
      bool ok[3] = {true, true, true};
      for (int s = 0; s < 20; ++s) {
        StepOutcome out = advance(state, cfg, 1e300);
        for (const auto& r : out.record.reports) {
          int slot = r.name == "mass_balance" ? 0
                     : r.name == "density_bounds" ? 1
                     : r.name == "entropy_l2" ? 2 : -1;
          if (slot < 0) continue;
          if (r.residual - r.tolerance > worst[slot] - tol[slot]) {
            worst[slot] = r.residual;
            tol[slot] = r.tolerance;
          }
          ok[slot] = ok[slot] && r.passed();
        }
        state = std::move(out.state);
      }
      const char* names[3] = {"mass_balance", "density_bounds", "entropy_l2"};
      for (int slot = 0; slot < 3; ++slot) {
        rows.push_back({names[slot], n, to_string(bc), worst[slot], tol[slot],
                        ok[slot]});
      }
    }
  }
  return rows;
}

}  // namespace hsgrowth
