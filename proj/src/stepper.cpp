#include "rotasym/stepper.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "rotasym/errors.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/spectral.hpp"

namespace rotasym {

const std::array<std::string, kMetricCount>& metric_names() {
  static const std::array<std::string, kMetricCount> names = {
      "energy",           "dissipation",       "energy_budget",        "kernel_residual",
      "alignment_error",  "coupling_pairing",  "weak_form_residual",   "heat_identity_gap",
      "oscillation_residual", "commutator",    "substeps"};
  return names;
}

void Trajectory::add_snapshot(double t, Field3 u) {
  if (!times_.empty() && !(t > times_.back())) throw InvalidInput("trajectory times must be strictly increasing");
  times_.push_back(t);
  states_.push_back(std::move(u));
}

void validate(const SolverConfig& c) {
  auto req = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(what);
  };
  req(c.nu >= 0.0, "nu must be >= 0");
  req(c.eps > 0.0, "eps must be > 0");
  req(c.dt > 0.0, "dt must be > 0");
  req(c.t_end > 0.0, "t_end must be > 0");
  req(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0, "cfl_safety must lie in (0, 1]");
  req(c.midpoint_iters >= 1, "midpoint_iters must be >= 1");
  req(c.snapshot_stride >= 1, "snapshot_stride must be >= 1");
  req(c.tol_kernel > 0.0, "tol_kernel must be > 0");
}

Field3 step_rotation_group(const Field3& u, double dt, double eps, const RotationProfile& profile, int max_iters,
                           double tol) {
  const double s = dt / (2.0 * eps);
  const double bmax = std::max(std::abs(profile.b_max()), std::abs(profile.b_min()));
  if (s * bmax >= 1.0) {
    std::ostringstream os;
    os << "rotation step: dt*max(b)/(2 eps) = " << s * bmax << " >= 1, fixed point does not contract";
    throw StepSizeError(os.str());
  }
  const Field3 u0 = u.is_spectral() ? u : u.as_spectral();
  const double scale = norm(u0);
  Field3 v = u0;
  int it = 0;
  for (; it < max_iters; ++it) {
    Field3 next = u0;
    next.axpy(-s, apply_L(v, profile, false));
    double diff = 0.0;  // ‖next − v‖² / vol
    for (int c = 0; c < 3; ++c) {
      auto x = next.spectral(c), y = v.spectral(c);
      for (std::size_t i = 0; i < x.size(); ++i) diff += std::norm(x[i] - y[i]);
    }
    v = std::move(next);
    if (std::sqrt(diff * u0.grid().volume()) <= tol * scale) break;
  }
  if (it == max_iters && scale > 0.0) throw StepSizeError("rotation step: fixed point did not converge in midpoint_iters");
  v *= 2.0;
  v -= u0;
  if (u.is_physical()) v.to_physical();
  return v;
}

Field3 nonlinear_term(const Field3& u) {
  Field3 d = dealias(u.is_spectral() ? u : u.as_spectral());
  Field3 w = curl(d);
  Field3 out = cross(d.as_physical(), w.as_physical());
  out.to_spectral();
  out = leray_project(dealias(out));
  if (u.is_physical()) out.to_physical();
  return out;
}

namespace {

std::vector<double> decay_factors(const Grid& g, double nu, double h) {
  std::vector<double> e(g.size());
  std::size_t i = 0;
  for (int a = 0; a < g.nh(); ++a)
    for (int b = 0; b < g.nh(); ++b)
      for (int c = 0; c < g.n3(); ++c) {
        const double k1 = Grid::deriv_wavenumber(a, g.nh()), k2 = Grid::deriv_wavenumber(b, g.nh()),
                     k3 = Grid::deriv_wavenumber(c, g.n3());
        e[i++] = std::exp(-nu * (k1 * k1 + k2 * k2 + k3 * k3) * h);
      }
  return e;
}

void scale_modes(Field3& f, const std::vector<double>& e) {
  for (int c = 0; c < 3; ++c) {
    auto x = f.spectral(c);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= e[i];
  }
}

// Integrating-factor Heun step for ∂t u = N(u) + νΔu (spectral in/out).
Field3 nonlinear_viscous_step(const Field3& u, const SolverConfig& cfg, double h) {
  const std::vector<double> e = decay_factors(u.grid(), cfg.nu, h);
  if (!cfg.nonlinear) {
    Field3 out = u;
    scale_modes(out, e);
    return out;
  }
  Field3 n0 = nonlinear_term(u);
  Field3 u1 = u;
  u1.axpy(h, n0);
  scale_modes(u1, e);
  Field3 n1 = nonlinear_term(u1);
  Field3 out = u;
  out.axpy(0.5 * h, n0);
  scale_modes(out, e);
  out.axpy(0.5 * h, n1);
  return leray_project(out);
}

Field3 strang_step(const Field3& u, const SolverConfig& cfg, const RotationProfile& profile, double h) {
  Field3 v = u;
  if (cfg.rotation) v = step_rotation_group(v, 0.5 * h, cfg.eps, profile, cfg.midpoint_iters, cfg.midpoint_tol);
  v = nonlinear_viscous_step(v, cfg, h);
  if (cfg.rotation) v = step_rotation_group(v, 0.5 * h, cfg.eps, profile, cfg.midpoint_iters, cfg.midpoint_tol);
  return v;
}

double max_speed(const Field3& p) {
  auto a = p.physical(0), b = p.physical(1), c = p.physical(2);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return std::sqrt(m);
}

long step_count(const SolverConfig& cfg, double t_start) {
  const double span = cfg.t_end - t_start;
  if (span <= 0.0) throw InvalidInput("run: t_end must exceed the start time");
  const long n = std::lround(span / cfg.dt);
  if (n < 1 || std::abs(n * cfg.dt - span) > 1e-9 * std::max(1.0, span))
    throw InvalidInput("run: (t_end - t_start) must be a multiple of dt");
  return n;
}

void progress(const RunOptions& o, const char* tag, double t, double e, double d) {
  if (!o.log) return;
  *o.log << tag << " t=" << t << " energy=" << e << " dissipation=" << d << '\n';
}

}  // namespace

Field3 step_rotating_ns(const Field3& u, const SolverConfig& cfg, const RotationProfile& profile) {
  validate(cfg);
  if (divergence_defect(u) > 1e-8) throw PreconditionError("step_rotating_ns: input is not divergence-free");
  Field3 v = strang_step(u.as_spectral(), cfg, profile, cfg.dt);
  if (!v.all_finite()) throw BlowUpError("non-finite values in step", cfg.dt);
  if (u.is_physical()) v.to_physical();
  return v;
}

Trajectory run_rotating_ns(const Field3& u0, const SolverConfig& cfg, const RotationProfile& profile,
                           const RunOptions& opts) {
  validate(cfg);
  if (u0.grid() != profile.grid()) throw InvalidInput("run: field and profile grids differ");
  const long nsteps = step_count(cfg, opts.t_start);
  // State is kept physical between steps so that a resumed run sees identical bits.
  Field3 u = opts.resume ? u0.as_physical() : leray_project(u0).to_physical();
  Trajectory traj;
  const double e0 = inner(u, u);
  double d_prev = 2.0 * cfg.nu * gradient_norm_sq(u);
  double cum = 0.0;
  auto record = [&](double t, double e, double d, int sub) {
    DiagnosticRecord r(t);
    r.set(Metric::energy, e);
    r.set(Metric::dissipation, d);
    r.set(Metric::energy_budget, e0 > 0.0 ? (e + cum - e0) / e0 : 0.0);
    r.set(Metric::substeps, sub);
    traj.add_record(r);
  };
  record(opts.t_start, e0, d_prev, 0);
  traj.add_snapshot(opts.t_start, u);
  if (opts.on_snapshot) opts.on_snapshot(opts.t_start, u);
  progress(opts, "ns", opts.t_start, e0, d_prev);

  const double bmax = std::max(std::abs(profile.b_max()), std::abs(profile.b_min()));
  for (long n = 1; n <= nsteps; ++n) {
    const double t = opts.t_start + double(n) * cfg.dt;
    double bound = cfg.rotation ? cfg.eps / std::max(bmax, 1e-300) : 1e300;
    if (cfg.nonlinear) {
      const double umax = max_speed(u);
      if (umax > 0.0) bound = std::min(bound, 1.0 / (u.grid().nh() * umax));
    }
    bound *= cfg.cfl_safety;
    int sub = 1;
    if (cfg.dt > bound) {
      sub = int(std::ceil(cfg.dt / bound));
      if (opts.log) *opts.log << "cfl: step at t=" << t << " split into " << sub << " substeps\n";
    }
    Field3 s = u.as_spectral();
    for (int k = 0; k < sub; ++k) s = strang_step(s, cfg, profile, cfg.dt / sub);
    if (!s.all_finite()) throw BlowUpError("non-finite values at t=" + std::to_string(t), t);
    u = s.to_physical();
    const double e = inner(u, u);
    const double d = 2.0 * cfg.nu * gradient_norm_sq(u);
    cum += 0.5 * cfg.dt * (d_prev + d);
    d_prev = d;
    record(t, e, d, sub);
    if (n % cfg.snapshot_stride == 0 || n == nsteps) {
      traj.add_snapshot(t, u);
      if (opts.on_snapshot) opts.on_snapshot(t, u);
      progress(opts, "ns", t, e, d);
    }
  }
  return traj;
}

Trajectory run_limit_system(const Field3& u0, const SolverConfig& cfg, const RotationProfile& profile,
                            const KernelProjector* projector, const RunOptions& opts) {
  validate(cfg);
  if (u0.grid() != profile.grid()) throw InvalidInput("limit: field and profile grids differ");
  std::unique_ptr<KernelProjector> own;
  if (!projector) {
    own = std::make_unique<KernelProjector>(profile);
    projector = own.get();
  }
  const Grid& g = u0.grid();
  const int n = cfg.truncation < 0 ? g.nh() / 3 : cfg.truncation;
  const long nsteps = step_count(cfg, opts.t_start);
  const KernelProjector& Pi = *projector;

  auto rhs = [&](const Field3& ub) {
    Field3 v = truncate_Jn(ub.as_spectral(), n);
    Field3 w = curl(v);
    Field3 x = cross(v.as_physical(), w.as_physical()).to_spectral();
    x.axpy(cfg.nu, laplacian(v, true));
    if (!cfg.nonlinear) x = cfg.nu * laplacian(v, true);
    x = leray_project(truncate_Jn(x, n));
    return truncate_Jn(Pi.apply(x, false), n);
  };
  auto drift = [&](const Field3& ub) {
    Field3 d = ub;
    d -= Pi.apply(ub, false);
    const double nn = norm(ub);
    return nn > 0.0 ? norm(d) / nn : 0.0;
  };
  auto commutator = [&](const Field3& ub) {
    Field3 a = truncate_Jn(Pi.apply(ub, false), n);
    a -= Pi.apply(truncate_Jn(ub, n), false);
    const double nn = norm(ub);
    return nn > 0.0 ? norm(a) / nn : 0.0;
  };

  Field3 u = opts.resume ? u0.as_spectral() : Pi.apply(leray_project(u0.as_spectral()), false);
  Trajectory traj;
  const double e0 = inner(u, u);
  double d_prev = 2.0 * cfg.nu * gradient_norm_sq(u);
  double cum = 0.0;
  auto record = [&](double t, double e, double d, bool full) {
    DiagnosticRecord r(t);
    r.set(Metric::energy, e);
    r.set(Metric::dissipation, d);
    r.set(Metric::energy_budget, e0 > 0.0 ? (e + cum - e0) / e0 : 0.0);
    if (full) {
      r.set(Metric::kernel_residual, kernel_residual(u, profile));
      r.set(Metric::commutator, commutator(u));
    }
    traj.add_record(r);
  };
  record(opts.t_start, e0, d_prev, true);
  traj.add_snapshot(opts.t_start, u.as_physical());
  if (opts.on_snapshot) opts.on_snapshot(opts.t_start, traj.final_state());
  progress(opts, "limit", opts.t_start, e0, d_prev);

  const double h = cfg.dt;
  for (long s = 1; s <= nsteps; ++s) {
    const double t = opts.t_start + double(s) * h;
    Field3 k0 = rhs(u);
    Field3 u1 = u;
    u1.axpy(h, k0);
    u1 = Pi.apply(u1, false);
    Field3 k1 = rhs(u1);
    Field3 next = u;
    next.axpy(0.5 * h, k0);
    next.axpy(0.5 * h, k1);
    u = Pi.apply(next, false);
    if (!u.all_finite()) throw BlowUpError("limit system: non-finite values at t=" + std::to_string(t), t);
    const double e = inner(u, u);
    const double d = 2.0 * cfg.nu * gradient_norm_sq(u);
    cum += 0.5 * h * (d_prev + d);
    d_prev = d;
    const bool snap = s % cfg.snapshot_stride == 0 || s == nsteps;
    if (snap) {
      const double dr = drift(u);
      if (dr > cfg.tol_kernel) {
        std::ostringstream os;
        os << "limit system: state left the range of the projector (" << dr << " > " << cfg.tol_kernel << ") at t=" << t;
        throw ProjectionError(os.str());
      }
    }
    record(t, e, d, snap);
    if (snap) {
      traj.add_snapshot(t, u.as_physical());
      if (opts.on_snapshot) opts.on_snapshot(t, traj.final_state());
      progress(opts, "limit", t, e, d);
      if (opts.log) *opts.log << "limit commutator |J_n Pi - Pi J_n| = " << traj.records().back().get(Metric::commutator).value_or(0.0) << '\n';
    }
  }
  return traj;
}

}  // namespace rotasym
