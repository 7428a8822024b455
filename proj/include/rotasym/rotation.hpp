#pragma once

#include <memory>
#include <vector>

#include "rotasym/field.hpp"
#include "rotasym/profile.hpp"

namespace rotasym {

// L u = P(u ∧ b e3). Throws PreconditionError when check is set and u is not
// divergence-free to 1e-8 (relative to ‖∇u‖).
Field3 apply_L(const Field3& u, const RotationProfile& profile, bool check = true);

// ‖b ∂3 u − (u_h·∇_h b) e3‖ / ‖u‖, 0 for the zero field.
double kernel_residual(const Field3& u, const RotationProfile& profile);

// Relative size of div u against ‖∇u‖ (0 for constant fields).
double divergence_defect(const Field3& u);

struct KernelData {
  PlaneField alpha;            // vertical component
  PlaneField stream;           // full φ = φ_S + G(b)
  PlaneField stream_singular;  // part of φ carried by S-cells
  std::vector<double> level_coefficients;  // G' in the level-set basis
  std::vector<double> bin_F;               // G'(b) at each bin's mid value
  double solver_residual = 0.0;
  int iterations = 0;

  // ∇_h^⊥φ + α e3 on the given grid.
  Field3 reconstruct(const Grid& g) const;
};

struct ProjectorOptions {
  double tol = 1e-12;  // CG relative residual on the normal equations
  int max_iters = 20000;
};

// Orthogonal projector onto the discrete kernel: φ free on S-cells plus
// G(b) = Σ c_j Θ_j(b) on O, solved jointly in the least-squares sense.
class KernelProjector {
 public:
  explicit KernelProjector(const RotationProfile& profile, ProjectorOptions opts = {});
  ~KernelProjector();
  KernelProjector(KernelProjector&&) noexcept;
  KernelProjector& operator=(KernelProjector&&) noexcept;

  Field3 apply(const Field3& u, bool check = true) const;
  KernelData decompose(const Field3& u, bool check = true) const;
  // Horizontal part only: projection of a plane vector field.
  void project_plane(const PlaneField& v1, const PlaneField& v2, PlaneField& o1, PlaneField& o2) const;
  const RotationProfile& profile() const;
  std::size_t unknowns() const;
  int last_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Field3 kernel_project_geometric(const Field3& u, const RotationProfile& profile);
Field3 pi_perp(const Field3& u, const RotationProfile& profile);
Field3 pi_perp(const Field3& u, const KernelProjector& projector);

struct ErgodicOptions {
  double energy_tol = 1e-10;  // per-step relative energy drift allowed
  double eps = 1.0;
};

// Trapezoidal time average over [0, T] of ∂t v = −L v, v(0) = u; one result per
// requested horizon (all horizons must be multiples of dt, increasing).
std::vector<Field3> kernel_project_ergodic(const Field3& u, const RotationProfile& profile,
                                           const std::vector<double>& horizons, double dt,
                                           const ErgodicOptions& opts = {});
Field3 kernel_project_ergodic(const Field3& u, const RotationProfile& profile, double T, double dt);

// W with ∂3 W = w and zero vertical mean; throws when w has vertical mean
// above 1e-8 relative.
Field3 vertical_antiderivative(const Field3& w);
ScalarField vertical_antiderivative(const ScalarField& w);

}  // namespace rotasym
