#include <gtest/gtest.h>

#include <cmath>

#include "rotasym/diagnostics.hpp"
#include "rotasym/errors.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/spectral.hpp"

using namespace rotasym;

namespace {
const RadialParams kBump{.b0 = 1.0, .amplitude = 0.5, .radius = 1.5};
}

TEST(Energy, PhysicalAndSpectralAgree) {
  Grid g(32, 16);
  Field3 u = random_divergence_free(g, {.seed = 2});
  EnergyReport a = energy_report(u, 0.1), b = energy_report(u.as_spectral(), 0.1);
  EXPECT_NEAR(a.energy / b.energy, 1.0, 1e-12);
  EXPECT_NEAR(a.dissipation / b.dissipation, 1.0, 1e-12);
  EXPECT_NEAR(a.energy, g.volume(), 1e-9 * g.volume());  // unit RMS
}

TEST(RotationalIdentity, SingleModeIsExact) {
  Grid g(16, 8);
  Field3 u = taylor_green(g);
  EXPECT_LT(rotational_identity_residual(u, false), 1e-12);
  EXPECT_LT(rotational_identity_residual(u, true), 1e-12);
}

TEST(RotationalIdentity, DealiasedFieldsAndAliasing) {
  Grid g(32, 16);
  Field3 u = random_divergence_free(g, {.seed = 3});
  EXPECT_LT(rotational_identity_residual(u, true), 1e-10);
  // full-band data: products alias and the undealiased identity breaks
  Field3 rough = random_divergence_free(g, {.seed = 3, .slope = 0.0, .band = 15});
  Field3 r = rough;
  EXPECT_GT(rotational_identity_residual(r, false), 1e-6);
}

TEST(Alignment, KernelFieldsAreAligned) {
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  Field3 u = level_set_field(prof, [](double b) { return b * b; });
  EXPECT_LT(alignment_error(u, prof).value, 1e-2);
  Field3 w = random_divergence_free(g, {.seed = 4});
  EXPECT_GT(alignment_error(w, prof).value, 0.3);
  EXPECT_TRUE(alignment_error(w, RotationProfile::constant(g, 1.0)).empty_region);
}

TEST(TestFunctions, StandardSetInvariants) {
  Grid g(32, 16);
  for (const auto& prof : {RotationProfile::radial(g, kBump), RotationProfile::constant(g, 1.0)}) {
    TestFunctionSet set = TestFunctionSet::standard(prof);
    EXPECT_EQ(set.tagged(TestTag::kernel).size(), 4u);
    EXPECT_EQ(set.tagged(TestTag::generic).size(), 4u);
    for (const auto& f : set.all()) {
      EXPECT_NEAR(norm(f.chi), 1.0, 1e-12);
      EXPECT_LT(divergence_defect(f.chi), 1e-10) << f.name;
      if (f.tag == TestTag::kernel) EXPECT_LT(kernel_residual(f.chi, prof), 1e-8) << f.name;
    }
  }
}

TEST(Coupling, KernelTestsAnnihilateGradBTerms) {
  // fields of the form f(x_h) ∇_h b pair to zero with kernel-tagged χ after
  // Leray projection (they are gradients of F(b)) or by orthogonality
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  TestFunctionSet set = TestFunctionSet::standard(prof);
  PlaneField z(32);
  Field3 gb = from_planes(g, prof.grad_b(0), prof.grad_b(1), z);
  for (const TestFunction* f : set.tagged(TestTag::kernel)) {
    if (f->name.rfind("perp_grad_b", 0) != 0) continue;
    EXPECT_LT(std::abs(inner(gb, f->chi)), 1e-10 * norm(gb));
  }
  KernelProjector pi(prof);
  Field3 w = pi_perp(random_divergence_free(g, {.seed = 9}), pi);
  CouplingPairing cp = coupling_pairing(w, pi, set);
  EXPECT_EQ(cp.variable_form.size(), 4u);
  EXPECT_GT(cp.max_abs(), 0.0);
}

TEST(HeatIdentity, AzimuthalKernelField) {
  Grid g(64, 8);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  Field3 u = level_set_field(prof, [](double b) { return bump_level_function(b, 1.0, 0.5); });
  HeatIdentityResult r = heat_identity_check(u, pi);
  EXPECT_EQ(r.status, HeatIdentityResult::Status::ok);
  EXPECT_LT(r.range_defect, 1e-8);
  EXPECT_LT(r.gap, 1e-4);
  EXPECT_LT(r.outside_fraction, 1e-3);
}

TEST(HeatIdentity, StatusForBadInputs) {
  Grid g(32, 8);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  EXPECT_EQ(heat_identity_check(Field3(g), pi).status, HeatIdentityResult::Status::zero_field);
  EXPECT_EQ(heat_identity_check(taylor_green(g), pi).status, HeatIdentityResult::Status::outside_regular_set);
}

TEST(WeakForm, ExactTaylorGreenSolution) {
  // u(t) = e^{−2νt} TG solves NS; with an exact time history the residual is
  // the trapezoid error only.
  Grid g(16, 8);
  const double nu = 0.1;
  Trajectory tr;
  for (int n = 0; n <= 400; ++n) tr.add_snapshot(n * 0.0025, std::exp(-2 * nu * n * 0.0025) * taylor_green(g));
  TestFunctionSet set = TestFunctionSet::standard(RotationProfile::constant(g, 1.0));
  for (const auto& f : set.all()) {
    SpaceTimeTest phi{f.chi, 1.0};
    EXPECT_LT(std::abs(weak_form_residual(tr, phi, nu)), 1e-5) << f.name;
  }
  // a wrong viscosity is detected
  SpaceTimeTest tg{taylor_green(g), 1.0};
  tg.chi *= 1.0 / norm(tg.chi);
  EXPECT_GT(std::abs(weak_form_residual(tr, tg, 2 * nu)), 1e-2);
}

TEST(Oscillation, RejectsCoarseOrIrregularSampling) {
  Grid g(16, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  KernelProjector pi(prof);
  TestFunctionSet set = TestFunctionSet::standard(prof);
  Trajectory tr;
  for (int n = 0; n < 4; ++n) tr.add_snapshot(0.1 * n, taylor_green(g));
  EXPECT_THROW(oscillation_residual(tr, 0.01, prof, pi, set), SamplingError);
  Trajectory irr;
  for (double t : {0.0, 0.001, 0.003}) irr.add_snapshot(t, taylor_green(g));
  EXPECT_THROW(oscillation_residual(irr, 1.0, prof, pi, set), SamplingError);
}

static double linear_oscillation_worst(const RotationProfile& prof, double eps, double dt) {
  KernelProjector pi(prof);
  TestFunctionSet set = TestFunctionSet::standard(prof);
  SolverConfig cfg{.nu = 0.0, .eps = eps, .dt = dt, .t_end = 0.05, .snapshot_stride = 1, .nonlinear = false};
  Trajectory tr = run_rotating_ns(random_divergence_free(prof.grid(), {.seed = 1, .band = 3}), cfg, prof);
  auto res = oscillation_residual(tr, cfg.eps, prof, pi, set);
  EXPECT_FALSE(res.empty());
  double worst = 0;
  for (const auto& s : res) worst = std::max(worst, s.max_abs);
  return worst;
}

// Constant b: the kernel is exact, so only the centered difference error remains.
TEST(Oscillation, LinearDynamicsResidualIsSecondOrderInDt) {
  auto prof = RotationProfile::constant(Grid(16, 8), 1.0);
  const double e1 = linear_oscillation_worst(prof, 0.1, 2e-3);
  const double e2 = linear_oscillation_worst(prof, 0.1, 1e-3);
  EXPECT_LT(e1, 1e-4);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

// Variable b: the floor is the spatial kernel defect and shrinks with resolution.
TEST(Oscillation, LinearResidualFloorShrinksWithResolution) {
  const double e16 = linear_oscillation_worst(RotationProfile::radial(Grid(16, 8), kBump), 0.1, 1e-3);
  const double e32 = linear_oscillation_worst(RotationProfile::radial(Grid(32, 8), kBump), 0.1, 1e-3);
  EXPECT_LT(e32, 1e-3);
  EXPECT_LT(e32, 0.5 * e16);
}

TEST(TimeAverage, TrapezoidWeights) {
  Grid g(8, 8);
  Trajectory tr;
  tr.add_snapshot(0.0, 1.0 * taylor_green(g));
  tr.add_snapshot(1.0, 3.0 * taylor_green(g));
  tr.add_snapshot(3.0, 3.0 * taylor_green(g));
  Field3 a = time_average(tr);
  EXPECT_LT(norm(a - (8.0 / 3.0) * taylor_green(g)), 1e-12);
  EXPECT_THROW(tr.add_snapshot(2.0, taylor_green(g)), InvalidInput);
}

TEST(Convergence, ArgumentChecks) {
  Grid g(16, 8);
  auto prof = RotationProfile::constant(g, 1.0);
  SolverConfig cfg;
  EXPECT_THROW(convergence_study({0.1, 0.05}, cfg, prof, taylor_green(g)), InvalidInput);
  EXPECT_THROW(convergence_study({0.1, 0.2, 0.05}, cfg, prof, taylor_green(g)), InvalidInput);
}
