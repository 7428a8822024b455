#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "rotasym/errors.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/spectral.hpp"
#include "rotasym/stepper.hpp"

using namespace rotasym;

namespace {

const RadialParams kBump{.b0 = 1.0, .amplitude = 0.5, .radius = 1.5};

bool bitwise_equal(const Field3& a, const Field3& b) {
  for (int c = 0; c < 3; ++c) {
    auto x = a.physical(c), y = b.physical(c);
    if (std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

// x3-independent horizontal random field with u3 = 0.
Field3 random_2d(const Grid& g, std::uint64_t seed) {
  Field3 u = vertical_mean(random_divergence_free(g, {.seed = seed, .band = 4}));
  for (auto& v : u.physical(2)) v = 0.0;
  return leray_project(u);
}

}  // namespace

// On a single mode with constant b, L² = −ω² and the midpoint step is the
// Cayley transform ((1 − s²ω²) u − 2 s L u) / (1 + s²ω²), s = dt/(2ε).
TEST(RotationGroup, CayleyOracleOnSingleMode) {
  Grid g(16, 16);
  auto prof = RotationProfile::constant(g, 1.5);
  Field3 u(g, Representation::spectral);
  const std::size_t i = g.index(2, 1, 3), j = g.index(14, 15, 13);
  const Complex a[3] = {Complex(1, 1), Complex(1, -2), -(2.0 * Complex(1, 1) + Complex(1, -2)) / 3.0};
  for (int c = 0; c < 3; ++c) u.spectral(c)[i] = a[c], u.spectral(c)[j] = std::conj(a[c]);
  u.to_physical();
  const double dt = 0.05, eps = 0.1, s = dt / (2 * eps), omega = 1.5 * 3 / std::sqrt(14.0);
  Field3 want = (1 - s * s * omega * omega) * u - 2 * s * apply_L(u, prof);
  want *= 1.0 / (1 + s * s * omega * omega);
  Field3 got = step_rotation_group(u, dt, eps, prof);
  EXPECT_LT(norm(got - want) / norm(u), 1e-13);
}

TEST(RotationGroup, ConservesEnergyWithVariableB) {
  Grid g(16, 8);
  auto prof = RotationProfile::radial(g, kBump);
  Field3 u = random_divergence_free(g, {.seed = 3});
  const double e0 = inner(u, u);
  for (int n = 0; n < 1000; ++n) u = step_rotation_group(u, 0.01, 0.1, prof);
  EXPECT_LT(std::abs(inner(u, u) - e0) / e0, 1e-10);
  EXPECT_LT(divergence_defect(u), 1e-10);
}

TEST(RotationGroup, RejectsNonContractiveStep) {
  Grid g(16, 8);
  auto prof = RotationProfile::radial(g, kBump);
  Field3 u = random_divergence_free(g, {.seed = 3});
  EXPECT_THROW(step_rotation_group(u, 0.2, 0.1, prof), StepSizeError);  // 0.2·1.5/0.2 = 1.5
  EXPECT_THROW(step_rotation_group(u, 0.1, 0.1, prof, 2, 1e-14), StepSizeError);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(validate(c));
  c.nu = -1;
  EXPECT_THROW(validate(c), InvalidInput);
  c = {};
  c.eps = 0;
  EXPECT_THROW(validate(c), InvalidInput);
  c = {};
  c.cfl_safety = 1.5;
  EXPECT_THROW(validate(c), InvalidInput);
}

TEST(Navier, TaylorGreenDecaysExactly) {
  // TG is a steady Euler flow whose advection is a gradient, and it lies in
  // the kernel of L for constant b: u(t) = e^{−2νt} u(0).
  Grid g(32, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg{.nu = 0.1, .eps = 0.1, .dt = 1e-3, .t_end = 0.1, .snapshot_stride = 1000};
  Field3 u0 = taylor_green(g);
  Trajectory tr = run_rotating_ns(u0, cfg, prof);
  Field3 exact = std::exp(-2 * 0.1 * 0.1) * u0;
  EXPECT_LT(norm(tr.final_state() - exact) / norm(exact), 1e-10);
  EXPECT_NEAR(tr.final_time(), 0.1, 1e-12);
}

TEST(Navier, MatchesIndependent2DSolver) {
  Grid g(32, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg{.nu = 0.05, .eps = 0.1, .dt = 2e-3, .t_end = 0.4, .snapshot_stride = 50};
  Field3 u0 = random_2d(g, 7);
  // give the passive vertical component some structure
  Field3 w = vertical_mean(random_divergence_free(g, {.seed = 8, .band = 4}));
  for (std::size_t i = 0; i < g.size(); ++i) u0.physical(2)[i] = w.physical(0)[i];
  Trajectory a = run_rotating_ns(u0, cfg, prof);
  Trajectory b = run_ns2d_reference(u0, cfg);
  EXPECT_LT(norm(a.final_state() - b.final_state()) / norm(u0), 1e-5);
  ASSERT_EQ(a.size(), b.size());
}

TEST(Navier, StrangSplittingIsSecondOrder) {
  Grid g(16, 8);
  auto prof = RotationProfile::radial(g, kBump);
  Field3 u0 = 0.5 * random_divergence_free(g, {.seed = 12, .band = 3});
  auto run = [&](double dt) {
    SolverConfig cfg{.nu = 0.05, .eps = 0.5, .dt = dt, .t_end = 0.2, .snapshot_stride = 100000};
    return run_rotating_ns(u0, cfg, prof).final_state();
  };
  Field3 ref = run(0.2 / 512);
  const double e1 = norm(run(0.2 / 16) - ref), e2 = norm(run(0.2 / 32) - ref);
  EXPECT_GT(e1 / e2, 3.3);
  EXPECT_LT(e1 / e2, 4.7);
}

TEST(Navier, EnergyBudgetAndDivergence) {
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  SolverConfig cfg{.nu = 0.05, .eps = 0.05, .dt = 2e-3, .t_end = 0.1, .snapshot_stride = 10};
  Trajectory tr = run_rotating_ns(random_divergence_free(g, {.seed = 1}), cfg, prof);
  for (const auto& r : tr.records()) EXPECT_LE(*r.get(Metric::energy_budget), 1e-5);
  for (const auto& s : tr.snapshots()) EXPECT_LT(divergence_defect(s), 1e-8);
  EXPECT_EQ(tr.size(), 6u);
}

TEST(Navier, CflSubstepsAreLogged) {
  Grid g(16, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg{.nu = 0.05, .eps = 0.01, .dt = 0.02, .t_end = 0.04};
  std::ostringstream log;
  Trajectory tr = run_rotating_ns(random_divergence_free(g, {.seed = 2}), cfg, prof, {.log = &log});
  EXPECT_NE(log.str().find("substeps"), std::string::npos);
  EXPECT_GT(*tr.records().back().get(Metric::substeps), 1.0);
}

TEST(Navier, RejectsIncommensurateHorizon) {
  Grid g(16, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg{.dt = 0.03, .t_end = 0.1};
  EXPECT_THROW(run_rotating_ns(random_divergence_free(g, {}), cfg, prof), InvalidInput);
}

TEST(Navier, CheckpointResumeIsBitwise) {
  Grid g(16, 8);
  auto prof = RotationProfile::radial(g, kBump);
  SolverConfig cfg{.nu = 0.05, .eps = 0.1, .dt = 5e-3, .t_end = 0.1, .snapshot_stride = 10};
  const Field3 u0 = random_divergence_free(g, {.seed = 5});
  Trajectory full = run_rotating_ns(u0, cfg, prof);
  const Field3 mid = full.snapshot(1);  // t = 0.05
  Trajectory rest = run_rotating_ns(mid, cfg, prof, {.t_start = full.times()[1], .resume = true});
  EXPECT_TRUE(bitwise_equal(full.final_state(), rest.final_state()));
}

TEST(Limit, ConstantBReducesTo2DNavierStokes) {
  Grid g(32, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg{.nu = 0.05, .eps = 0.1, .dt = 2e-3, .t_end = 0.2, .snapshot_stride = 50};
  Field3 u0 = random_2d(g, 9);
  Trajectory lim = run_limit_system(u0, cfg, prof);
  Trajectory ref = run_ns2d_reference(u0, cfg);
  EXPECT_LT(norm(lim.final_state() - ref.final_state()) / norm(u0), 1e-5);
}

TEST(Limit, StaysInRangeAndReportsDrift) {
  Grid g(32, 8);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  SolverConfig cfg{.nu = 0.05, .eps = 0.1, .dt = 5e-3, .t_end = 0.05, .snapshot_stride = 5};
  Trajectory tr = run_limit_system(random_divergence_free(g, {.seed = 4}), cfg, prof, &pi);
  for (const auto& s : tr.snapshots()) EXPECT_LT(norm(pi.apply(s) - s) / norm(s), 1e-6);
  EXPECT_TRUE(tr.records().front().get(Metric::commutator).has_value());
  cfg.tol_kernel = 1e-300;
  EXPECT_THROW(run_limit_system(random_divergence_free(g, {.seed = 4}), cfg, prof, &pi), ProjectionError);
}

TEST(Reference2D, RejectsThreeDimensionalData) {
  Grid g(16, 8);
  SolverConfig cfg{.dt = 0.01, .t_end = 0.02};
  EXPECT_THROW(run_ns2d_reference(random_divergence_free(g, {}), cfg), PreconditionError);
}
