#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rotasym/errors.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/profile.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/spectral.hpp"

using namespace rotasym;

namespace {

const RadialParams kBump{.b0 = 1.0, .amplitude = 0.5, .radius = 1.5};

// Real single Fourier mode with wavevector k and complex amplitude a ⊥ k.
Field3 single_mode(const Grid& g, const int k[3], const Complex a[3]) {
  Field3 u(g, Representation::spectral);
  const int nh = g.nh(), n3 = g.n3();
  const std::size_t i = g.index((k[0] + nh) % nh, (k[1] + nh) % nh, (k[2] + n3) % n3);
  const std::size_t j = g.index((nh - k[0]) % nh, (nh - k[1]) % nh, (n3 - k[2]) % n3);
  for (int c = 0; c < 3; ++c) {
    u.spectral(c)[i] = a[c];
    u.spectral(c)[j] = std::conj(a[c]);
  }
  return u.to_physical();
}

}  // namespace

TEST(Profile, RegionsOfTheBump) {
  Grid g(32, 8);
  auto p = RotationProfile::radial(g, kBump);
  EXPECT_GT(p.count(Region::regular), 0u);
  EXPECT_GT(p.count(Region::singular), 0u);
  EXPECT_GT(p.count(Region::band), 0u);
  // far corner: b = b0 and flat; the centre of the bump is a critical point of b
  EXPECT_EQ(p.region(0, 0), Region::singular);
  EXPECT_NE(p.region(16, 16), Region::regular);
  EXPECT_NEAR(p.b_min(), 1.0, 1e-12);
  EXPECT_NEAR(p.b_max(), 1.5, 1e-12);
  // every band cell touches O
  for (int a = 0; a < 32; ++a)
    for (int b = 0; b < 32; ++b) {
      if (p.region(a, b) != Region::band) continue;
      bool touches = false;
      for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) touches |= p.region((a + da + 32) % 32, (b + db + 32) % 32) == Region::regular;
      EXPECT_TRUE(touches);
    }
  std::size_t binned = 0;
  for (const auto& bin : p.bins()) binned += bin.cells.size();
  EXPECT_EQ(binned, p.count(Region::regular));
}

TEST(Profile, RejectsBadParameters) {
  Grid g(16, 8);
  EXPECT_THROW(RotationProfile::radial(g, {.b0 = 0.0}), InvalidProfile);
  EXPECT_THROW(RotationProfile::radial(g, {.b0 = 1.0, .amplitude = -1.0}), InvalidProfile);
  EXPECT_THROW(RotationProfile::radial(g, {.b0 = 1.0, .radius = 4.0}), InvalidInput);
  EXPECT_THROW(RotationProfile::radial(g, {.b0 = 1.0, .n_bins = 2}), InvalidInput);
  EXPECT_TRUE(RotationProfile::constant(g, 2.0).is_constant());
  EXPECT_EQ(RotationProfile::constant(g, 2.0).count(Region::regular), 0u);
}

// Per-mode oracle: for constant b, L acts on the mode k as P_k(b a2, −b a1, 0).
TEST(ApplyL, ConstantBMatchesModeFormula) {
  Grid g(16, 16);
  auto prof = RotationProfile::constant(g, 2.0);
  const int k[3] = {1, -2, 3};
  const Complex a[3] = {Complex(2, 1), Complex(1, 0), Complex(0, -1.0 / 3.0) * 0.0};
  // make a ⊥ k: a3 = −(k1 a1 + k2 a2)/k3
  Complex am[3] = {a[0], a[1], -(double(k[0]) * a[0] + double(k[1]) * a[1]) / double(k[2])};
  Field3 u = single_mode(g, k, am);
  Field3 lu = apply_L(u, prof).as_spectral();
  Complex f[3] = {2.0 * am[1], -2.0 * am[0], 0.0};
  const double kk = 1 + 4 + 9;
  const Complex d = (double(k[0]) * f[0] + double(k[1]) * f[1] + double(k[2]) * f[2]) / kk;
  const std::size_t i = g.index(1, 14, 3);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(lu.spectral(c)[i] - (f[c] - double(k[c]) * d)), 0.0, 1e-13);
}

TEST(ApplyL, VariableBAgreesWithConstantPathAndIsSkew) {
  Grid g(32, 16);
  Field3 u = random_divergence_free(g, {.seed = 21});
  // a "variable" profile with tiny amplitude approaches the constant result
  auto c = RotationProfile::constant(g, 1.0);
  auto v = RotationProfile::radial(g, {.b0 = 1.0, .amplitude = 1e-9, .radius = 1.5});
  EXPECT_LT(norm(apply_L(u, c) - apply_L(u, v)) / norm(u), 1e-8);
  auto bump = RotationProfile::radial(g, kBump);
  Field3 w = random_divergence_free(g, {.seed = 22});
  EXPECT_LT(std::abs(inner(apply_L(u, bump), u)), 1e-12 * inner(u, u));
  EXPECT_LT(std::abs(inner(apply_L(u, bump), w) + inner(u, apply_L(w, bump))), 1e-12 * norm(u) * norm(w));
  EXPECT_TRUE(apply_L(u.as_spectral(), bump).is_spectral());
}

TEST(ApplyL, RejectsCompressibleInput) {
  Grid g(16, 8);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.physical(0)[i] = std::sin(0.1 * i);
  Field3 grad = gradient(dealias(f));
  EXPECT_THROW(apply_L(grad, RotationProfile::constant(g, 1.0)), PreconditionError);
  EXPECT_NO_THROW(apply_L(grad, RotationProfile::constant(g, 1.0), false));
}

TEST(KernelResidual, ExactKernelElements) {
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  // ∇⊥ b̃ broadcast in x3, plus an x3-independent vertical component
  PlaneField c3(32);
  for (int a = 0; a < 32; ++a)
    for (int b = 0; b < 32; ++b) c3(a, b) = std::cos(g.coord_h(a));
  PlaneField g1 = prof.grad_b(1), g0 = prof.grad_b(0);
  for (auto& x : g0.v) x = -x;
  Field3 u = from_planes(g, g1, g0, c3);
  EXPECT_LT(kernel_residual(u, prof), 1e-10);
  EXPECT_LT(norm(apply_L(u, prof)) / norm(u), 2e-3);  // product with b, not b̃: discretization level
  // a generic field is far from the kernel
  EXPECT_GT(kernel_residual(random_divergence_free(g, {.seed = 2}), prof), 0.1);
  EXPECT_EQ(kernel_residual(Field3(g), prof), 0.0);
}

TEST(KernelProjector, ConstantBIsVerticalMean) {
  Grid g(32, 16);
  auto prof = RotationProfile::constant(g, 1.0);
  KernelProjector pi(prof);
  Field3 u = random_divergence_free(g, {.seed = 5});
  Field3 want = leray_project(vertical_mean(u));
  EXPECT_LT(norm(pi.apply(u) - want) / norm(u), 1e-10);
  EXPECT_EQ(pi.unknowns(), 0u);
}

TEST(KernelProjector, ProjectorAlgebra) {
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    Field3 u = random_divergence_free(g, {.seed = s}), v = random_divergence_free(g, {.seed = 100 + s});
    Field3 pu = pi.apply(u), pv = pi.apply(v);
    EXPECT_LT(norm(pi.apply(pu) - pu) / norm(u), 1e-8);
    EXPECT_LT(std::abs(inner(pu, v) - inner(u, pv)), 1e-8 * norm(u) * norm(v));
    EXPECT_LT(std::abs(inner(u - pu, pu)), 1e-8 * inner(u, u));
    EXPECT_LT(norm(pi.apply(pi_perp(u, pi))) / norm(u), 1e-8);
    EXPECT_LE(norm(pu), norm(u));
    EXPECT_LT(norm(apply_L(pu, prof)) / norm(u), 5e-3);
    EXPECT_LT(divergence_defect(pu), 1e-10);
  }
}

TEST(KernelProjector, DecompositionReconstructsProjection) {
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  Field3 u = random_divergence_free(g, {.seed = 8});
  KernelData kd = pi.decompose(u);
  Field3 r = kd.reconstruct(g);
  EXPECT_LT(norm(r - pi.apply(u)) / norm(u), 1e-12);
  EXPECT_LT(divergence_defect(r), 1e-10);
  EXPECT_EQ(kd.bin_F.size(), prof.bins().size());
  EXPECT_GT(kd.iterations, 0);
  // projection fixes its range
  EXPECT_LT(norm(pi.apply(r) - r) / norm(r), 1e-6);
}

TEST(KernelProjector, LinearLevelFunctionIsExactKernel) {
  // φ = b̃ gives ∇⊥b̃, an exact discrete kernel element reproduced by Π
  Grid g(32, 16);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof);
  PlaneField g1 = prof.grad_b(1), g0 = prof.grad_b(0), zero(32);
  for (auto& x : g0.v) x = -x;
  Field3 u = from_planes(g, g1, g0, zero);
  Field3 pu = pi.apply(u);
  EXPECT_LT(norm(pu - u) / norm(u), 1e-6);
  EXPECT_LT(kernel_residual(pu, prof), 1e-8);
}

TEST(KernelProjector, ReportsNonConvergence) {
  Grid g(32, 8);
  auto prof = RotationProfile::radial(g, kBump);
  KernelProjector pi(prof, {.tol = 1e-14, .max_iters = 3});
  try {
    pi.apply(random_divergence_free(g, {.seed = 1}));
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 3);
    EXPECT_GT(e.achieved_residual(), 1e-14);
  }
}

// For constant b a single mode oscillates at ω = b k3/|k|; the implicit
// midpoint turns that into the Cayley angle θ = 2 atan(ω dt / 2), and the
// trapezoid average has modulus |S| with S = (1/N)(Σ_0^N e^{-inθ} − (1 + e^{-iNθ})/2).
TEST(Ergodic, SingleModeAverageMatchesCayleyOracle) {
  Grid g(16, 16);
  auto prof = RotationProfile::constant(g, 1.0);
  const int k[3] = {1, 0, 2};
  const Complex a[3] = {Complex(0, 2.0), Complex(1.0, 0.5), Complex(0, -1.0)};  // k·a = 0
  Field3 u = single_mode(g, k, a);
  const double dt = 0.1, omega = 2.0 / std::sqrt(5.0), theta = 2 * std::atan(omega * dt / 2);
  const std::vector<double> T = {5.0, 20.0};
  auto avg = kernel_project_ergodic(u, prof, T, dt);
  for (std::size_t m = 0; m < T.size(); ++m) {
    const long N = std::lround(T[m] / dt);
    Complex s = 0;
    for (long n = 0; n <= N; ++n) s += std::exp(Complex(0, -double(n) * theta));
    s -= 0.5 * (1.0 + std::exp(Complex(0, -double(N) * theta)));
    s /= double(N);
    EXPECT_NEAR(norm(avg[m]) / norm(u), std::abs(s), 1e-10);
  }
  // a kernel field is left unchanged
  const int k0[3] = {1, 2, 0};
  const Complex a0[3] = {Complex(2.0), Complex(-1.0), Complex(0.0, 1.0)};
  Field3 z = single_mode(g, k0, a0);
  EXPECT_LT(norm(kernel_project_ergodic(z, prof, 3.0, 0.5) - z) / norm(z), 1e-12);
  EXPECT_THROW(kernel_project_ergodic(z, prof, std::vector<double>{2.0, 1.0}, 0.5), InvalidInput);
}

TEST(VerticalAntiderivative, InvertsDerivative) {
  Grid g(16, 16);
  Field3 u = random_divergence_free(g, {.seed = 4});
  Field3 w = u - vertical_mean(u);
  Field3 W = vertical_antiderivative(w);
  EXPECT_LT(norm(partial(W, 2) - w) / norm(w), 1e-10);
  EXPECT_LT(norm(vertical_mean(W)), 1e-12 * norm(W));
  EXPECT_THROW(vertical_antiderivative(u), PreconditionError);
}
