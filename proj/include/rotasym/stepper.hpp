#pragma once

#include <functional>
#include <iosfwd>

#include "rotasym/field.hpp"
#include "rotasym/profile.hpp"
#include "rotasym/trajectory.hpp"

namespace rotasym {

class KernelProjector;

struct SolverConfig {
  double nu = 0.05;
  double eps = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.9;
  int truncation = -1;  // J_n cutoff of the limit system; < 0 means floor(n_h/3)
  int midpoint_iters = 200;
  double midpoint_tol = 1e-14;
  int snapshot_stride = 10;
  double tol_kernel = 1e-6;
  bool nonlinear = true;  // switches for verification runs
  bool rotation = true;
};

void validate(const SolverConfig& cfg);

// One implicit-midpoint step of ∂t v = −(1/ε) L v (fixed-point solve).
Field3 step_rotation_group(const Field3& u, double dt, double eps, const RotationProfile& profile,
                           int max_iters = 200, double tol = 1e-14);

// P D((Du) ∧ rot(Du)), the advection term in rotational form.
Field3 nonlinear_term(const Field3& u);

// One Strang step R(dt/2) N(dt) R(dt/2) of size cfg.dt.
Field3 step_rotating_ns(const Field3& u, const SolverConfig& cfg, const RotationProfile& profile);

struct RunOptions {
  std::ostream* log = nullptr;  // progress lines; nullptr silences them
  double t_start = 0.0;         // resume time (the state is taken as is)
  bool resume = false;
  // Called with each stored snapshot.
  std::function<void(double, const Field3&)> on_snapshot;
};

Trajectory run_rotating_ns(const Field3& u0, const SolverConfig& cfg, const RotationProfile& profile,
                           const RunOptions& opts = {});

Trajectory run_limit_system(const Field3& u0, const SolverConfig& cfg, const RotationProfile& profile,
                            const KernelProjector* projector = nullptr, const RunOptions& opts = {});

// Independent 2D vorticity/stream-function solver (plus passive third component).
Trajectory run_ns2d_reference(const Field3& u0_2d, const SolverConfig& cfg, const RunOptions& opts = {});

}  // namespace rotasym
