#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotasym/field.hpp"
#include "rotasym/profile.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/stepper.hpp"
#include "rotasym/trajectory.hpp"

namespace rotasym {

struct EnergyReport {
  double energy = 0.0;       // ‖u‖²
  double dissipation = 0.0;  // 2ν‖∇u‖²
};
EnergyReport energy_report(const Field3& u, double nu);

// Relative L² gap between u∧rot u and ∇|u|²/2 − ∇·(u⊗u) + u ∇·u, all products
// evaluated on the grid; with dealias set, both sides are 2/3-filtered.
double rotational_identity_residual(const Field3& u, bool dealiased = true);

struct AlignmentResult {
  double value = 0.0;
  bool empty_region = false;
};
// Relative size, over O, of the part of the vertical-mean horizontal field
// along ∇_h b (i.e. orthogonal to ∇_h^⊥ b).
AlignmentResult alignment_error(const Field3& u, const RotationProfile& profile);

enum class TestTag { kernel, generic };

struct TestFunction {
  std::string name;
  TestTag tag;
  Field3 chi;  // physical, divergence-free, unit norm
};

class TestFunctionSet {
 public:
  static constexpr int kVersion = 1;
  // 4 kernel-tagged and 4 generic band-limited (|k| <= 3) functions.
  static TestFunctionSet standard(const RotationProfile& profile, std::uint64_t seed = 20240611);

  void add(TestFunction f);
  const std::vector<TestFunction>& all() const { return items_; }
  std::vector<const TestFunction*> tagged(TestTag t) const;

 private:
  std::vector<TestFunction> items_;
};

struct CouplingPairing {
  std::vector<double> variable_form;  // ⟨Π P D(w∧rot w), χ⟩ per kernel-tagged χ
  std::vector<double> constant_form;  // ⟨P ∫ D(w∧rot w) dx3, χ⟩ per kernel-tagged χ
  double max_abs() const;
};
CouplingPairing coupling_pairing(const Field3& w, const KernelProjector& projector, const TestFunctionSet& tests);

// D(a ∧ rot b), the bilinear form behind the advection term.
Field3 rotational_product(const Field3& a, const Field3& b);

struct OscillationSample {
  double time = 0.0;
  std::vector<double> r_pairing;  // ⟨(r̃, 0), χ⟩ per test function
  std::vector<double> s_pairing;  // ⟨s̃, χ3⟩ per test function
  double max_abs = 0.0;
};
// Residuals of the oscillation equations at interior snapshots (uniform spacing).
std::vector<OscillationSample> oscillation_residual(const Trajectory& traj, double eps, const RotationProfile& profile,
                                                    const KernelProjector& projector, const TestFunctionSet& tests);

// Φ(t, x) = θ(t) χ(x), θ(t) = (1 + cos(π t / t_cut)) / 2 on [0, t_cut], 0 after.
struct SpaceTimeTest {
  Field3 chi;
  double t_cut = 1.0;
  double theta(double t) const;
  double theta_dot(double t) const;
};

struct WeakFormOptions {
  bool nonlinear = true;
  const RotationProfile* coriolis = nullptr;  // adds (1/ε)⟨u∧B, Φ⟩ when set
  double eps = 1.0;
};
// ∫∫(−u·∂tΦ + ν∇u:∇Φ − u⊗u:∇Φ) − ∫u(0)·Φ(0), trapezoid over snapshot times.
double weak_form_residual(const Trajectory& traj, const SpaceTimeTest& phi, double nu, const WeakFormOptions& opts = {});

struct HeatIdentityResult {
  enum class Status { ok, zero_field, outside_regular_set, not_in_range };
  double gap = 0.0;
  Status status = Status::ok;
  double outside_fraction = 0.0;  // share of ‖ū_h‖² on S ∪ band
  double range_defect = 0.0;      // ‖ū − Πū‖ / ‖ū‖
};
HeatIdentityResult heat_identity_check(const Field3& ubar, const KernelProjector& projector, double tol_kernel = 1e-6,
                                       double support_tol = 1e-3);

struct ConvergenceRow {
  double eps = 0.0;
  double e_strong = 0.0;         // ‖Π u_ε(T) − ū(T)‖
  double e_strong_masked = 0.0;  // same, restricted to O ∪ S (band removed)
  double e_weak = 0.0;           // max over generic χ of |time average of ⟨u_ε − ū, χ⟩|
  double alignment = 0.0;        // alignment_error of the time-averaged u_ε
  double alignment_projected = 0.0;  // alignment_error of Π u_ε(T)
  double coupling = 0.0;         // max over kernel χ of |time average of the coupling pairing|
  double energy_final = 0.0;
  bool failed = false;
  std::string error;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  Trajectory limit;
};

ConvergenceTable convergence_study(const std::vector<double>& eps_list, const SolverConfig& cfg,
                                   const RotationProfile& profile, const Field3& u0, std::ostream* log = nullptr);

// Time average (trapezoid over snapshot times) of the stored states.
Field3 time_average(const Trajectory& traj);

}  // namespace rotasym
