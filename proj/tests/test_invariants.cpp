#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsgrowth/invariants.hpp"
#include "hsgrowth/sim.hpp"

using namespace hsgrowth;

namespace {

struct StrictStep {
  ScalarField n_old, n_new, W_old, p_old;
  double dt;
};

StrictStep random_strict_step(std::mt19937_64& rng, BoundaryCondition bc, CflMode mode,
                              int cells = 16, double dt_factor = 1.0) {
  const ModelParams params;
  const GridSpec g = GridSpec::make(-2.5, 2.5, cells);
  ScalarField n = random_gaussian_mixture(g, rng, params.n_inf());
  ScalarField p = pressure(n, params);
  ScalarField W = solve_brinkman(p, params.mu(), bc).W;
  const FaceVelocities vel = face_velocities(W, bc);
  CflConfig cfg;
  cfg.mode = mode;
  const CflResult r = cfl_dt(vel, params, cfg, g.h, g.h, n.max());
  const double dt = r.dt * dt_factor;
  ScalarField n_new = transport_step(n, vel, p, dt, params, bc, CflMode::PracticalLinear);
  return {std::move(n), std::move(n_new), std::move(W), std::move(p), dt};
}

}  // namespace

TEST(DensityBounds, Examples) {
  const GridSpec g = GridSpec::make(0.0, 1.0, 5);
  const InvariantReport inside = check_density_bounds(ScalarField(g, 0.5), 1.0);
  EXPECT_TRUE(inside.passed());
  EXPECT_EQ(inside.residual, -0.5);

  ScalarField negative(g, 0.5);
  negative(4, 2) = -1e-6;
  const InvariantReport below = check_density_bounds(negative, 1.0);
  EXPECT_FALSE(below.passed());
  EXPECT_EQ(below.residual, 1e-6);
  ASSERT_TRUE(below.location.has_value());
  EXPECT_EQ(below.location->i, 4);
  EXPECT_EQ(below.location->j, 2);

  const InvariantReport edge = check_density_bounds(ScalarField(g, 1.3), 1.3);
  EXPECT_TRUE(edge.passed());
  EXPECT_EQ(edge.residual, 0.0);
}

TEST(PotentialBounds, Examples) {
  const GridSpec g = GridSpec::make(-2.5, 2.5, 24);
  const ScalarField c(g, 0.3);
  const EllipticSolution flat = solve_brinkman(c, 1.0, BoundaryCondition::Neumann);
  const InvariantReport r0 = check_potential_bounds(flat.W, c, flat.final_residual);
  EXPECT_TRUE(r0.passed());
  EXPECT_LE(std::abs(r0.residual), 1e-14);

  const ScalarField p = cell_average_init(
      [](double x, double y) { return std::exp(-3 * (x * x + y * y)); }, g);
  const EllipticSolution sol = solve_brinkman(p, 1.0, BoundaryCondition::Neumann);
  EXPECT_TRUE(check_potential_bounds(sol.W, p, sol.final_residual).passed());

  ScalarField bumped = sol.W;
  bumped(12, 12) = p.max() + 1e-3;
  const InvariantReport bad = check_potential_bounds(bumped, p, sol.final_residual);
  EXPECT_FALSE(bad.passed());
  EXPECT_NEAR(bad.residual, 1e-3, 1e-12);
  EXPECT_EQ(bad.location->i, 12);
}

TEST(MassBalance, RandomStrictStepsPass) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto bc = trial % 2 ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
    const StrictStep s = random_strict_step(rng, bc, CflMode::StrictLemma41);
    const InvariantReport r = check_mass_balance(s.n_old, s.n_new, s.p_old, s.dt, ModelParams());
    EXPECT_TRUE(r.passed()) << r.residual;
  }
}

TEST(MassBalance, DetectsTampering) {
  std::mt19937_64 rng(18);
  StrictStep s = random_strict_step(rng, BoundaryCondition::Neumann, CflMode::StrictLemma41);
  s.n_new(3, 5) += 1e-8;
  EXPECT_FALSE(check_mass_balance(s.n_old, s.n_new, s.p_old, s.dt, ModelParams()).passed());
}

TEST(MassBalance, ZeroState) {
  const GridSpec g = GridSpec::make(0.0, 1.0, 6);
  const ScalarField z(g);
  const InvariantReport r = check_mass_balance(z, z, z, 0.1, ModelParams());
  EXPECT_EQ(r.residual, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(EntropyL2, SteadyStateBothSidesVanish) {
  const ModelParams params;
  const GridSpec g = GridSpec::make(0.0, 1.0, 8);
  const ScalarField n(g, params.n_inf());
  const ScalarField p = pressure(n, params);
  const ScalarField W = solve_brinkman(p, 1.0, BoundaryCondition::Periodic).W;
  const InvariantReport r =
      check_entropy_l2(n, n, W, p, 0.01, params, BoundaryCondition::Periodic);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(std::abs(r.residual), 1e-12);
}

TEST(EntropyL2, RandomStrictStepsPass) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto bc = trial % 2 ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
    const StrictStep s = random_strict_step(rng, bc, CflMode::StrictLemma43);
    const InvariantReport r =
        check_entropy_l2(s.n_old, s.n_new, s.W_old, s.p_old, s.dt, ModelParams(), bc);
    EXPECT_TRUE(r.passed()) << r.residual << " > " << r.tolerance;
  }
}

TEST(EntropyL2, InflatedStepReportsPositiveResidual) {
  // A single sharp bump on a coarse grid: with dt fifty times too large the
  // squared time difference dominates and the inequality breaks.
  const ModelParams params;
  const GridSpec g = GridSpec::make(-2.5, 2.5, 16);
  const auto bc = BoundaryCondition::Neumann;
  const ScalarField n = cell_average_init(
      [](double x, double y) { return 0.9 * std::exp(-4 * (x * x + y * y)); }, g);
  const ScalarField p = pressure(n, params);
  const ScalarField W = solve_brinkman(p, 1.0, bc).W;
  const FaceVelocities vel = face_velocities(W, bc);
  CflConfig cfg;
  cfg.mode = CflMode::StrictLemma43;
  const double dt = 50.0 * cfl_dt(vel, params, cfg, g.h, g.h, n.max()).dt;
  const ScalarField n_new = transport_step(n, vel, p, dt, params, bc, CflMode::PracticalLinear);
  const InvariantReport r = check_entropy_l2(n, n_new, W, p, dt, params, bc);
  EXPECT_GT(r.residual, 0.0);
  EXPECT_FALSE(r.passed());
}

TEST(EnergyIdentity, ConstantPressure) {
  const GridSpec g = GridSpec::make(0.0, 1.0, 10);
  const ScalarField p(g, 0.7);
  const ScalarField W = solve_brinkman(p, 2.0, BoundaryCondition::Periodic).W;
  const InvariantReport r = check_energy_identity(W, p, 2.0, BoundaryCondition::Periodic);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.residual, 1e-13);
}

TEST(EnergyIdentity, RandomPeriodicSolves) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> d(0, 1);
  for (int n : {8, 16, 32}) {
    for (double mu : {0.1, 1.0, 10.0}) {
      const GridSpec g = GridSpec::make(-2.5, 2.5, n);
      ScalarField p(g);
      for (double& x : p.values()) x = d(rng);
      const ScalarField W = solve_brinkman(p, mu, BoundaryCondition::Periodic).W;
      const InvariantReport r = check_energy_identity(W, p, mu, BoundaryCondition::Periodic);
      EXPECT_TRUE(r.passed()) << n << " " << mu << " " << r.residual;
    }
  }
}

TEST(EnergyIdentity, DetectsWrongPotential) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(0, 1);
  const GridSpec g = GridSpec::make(0.0, 1.0, 12);
  ScalarField p(g);
  for (double& x : p.values()) x = d(rng);
  ScalarField W = solve_brinkman(p, 1.0, BoundaryCondition::Periodic).W;
  W(1, 1) += 1e-3;
  EXPECT_FALSE(check_energy_identity(W, p, 1.0, BoundaryCondition::Periodic).passed());
}

TEST(EnergyIdentity, NotApplicableUnderNeumann) {
  const GridSpec g = GridSpec::make(0.0, 1.0, 6);
  const ScalarField p(g, 1.0);
  const InvariantReport r = check_energy_identity(p, p, 1.0, BoundaryCondition::Neumann);
  EXPECT_EQ(r.status, CheckStatus::NotApplicable);
  EXPECT_FALSE(r.applicable());
}
