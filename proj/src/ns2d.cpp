// Independent doubly-periodic 2D solver in vorticity/stream-function form.
#include <cmath>
#include <ostream>

#include "rotasym/errors.hpp"
#include "rotasym/spectral.hpp"
#include "rotasym/stepper.hpp"

namespace rotasym {
namespace {

using Spec = std::vector<Complex>;

struct Plane2D {
  int n;
  std::vector<double> kx, ky, k2, decay;
  std::vector<bool> keep;  // 2/3 rule

  Plane2D(int nh, double nu, double h) : n(nh) {
    const std::size_t np = std::size_t(n) * n;
    kx.resize(np), ky.resize(np), k2.resize(np), decay.resize(np), keep.resize(np);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const std::size_t q = std::size_t(a) * n + b;
        kx[q] = Grid::deriv_wavenumber(a, n);
        ky[q] = Grid::deriv_wavenumber(b, n);
        k2[q] = kx[q] * kx[q] + ky[q] * ky[q];
        decay[q] = std::exp(-nu * k2[q] * h);
        keep[q] = std::abs(Grid::wavenumber(a, n)) <= n / 3 && std::abs(Grid::wavenumber(b, n)) <= n / 3;
      }
  }

  std::vector<double> to_phys(const Spec& s) const {
    std::vector<double> out(s.size());
    fft::backward2(n, s, out);
    return out;
  }
  Spec to_spec(const std::vector<double>& p) const {
    Spec out(p.size());
    fft::forward2(n, p, out);
    return out;
  }

  // velocity from vorticity: ψ̂ = ω̂/k², u = (∂2ψ, −∂1ψ)
  void velocity(const Spec& w, Spec& u1, Spec& u2) const {
    u1.resize(w.size());
    u2.resize(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) {
      const Complex psi = k2[q] > 0.0 ? w[q] / k2[q] : Complex(0.0);
      u1[q] = Complex(0.0, ky[q]) * psi;
      u2[q] = Complex(0.0, -kx[q]) * psi;
    }
  }

  // −u·∇f for f in {ω, u3}; dealiased.
  void advection(const Spec& w, const Spec& s3, Spec& nw, Spec& n3) const {
    Spec u1, u2;
    velocity(w, u1, u2);
    const auto p1 = to_phys(u1), p2 = to_phys(u2);
    auto adv = [&](const Spec& f) {
      Spec fx(f.size()), fy(f.size());
      for (std::size_t q = 0; q < f.size(); ++q) {
        fx[q] = Complex(0.0, kx[q]) * f[q];
        fy[q] = Complex(0.0, ky[q]) * f[q];
      }
      const auto gx = to_phys(fx), gy = to_phys(fy);
      std::vector<double> r(gx.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = -(p1[i] * gx[i] + p2[i] * gy[i]);
      Spec out = to_spec(r);
      for (std::size_t q = 0; q < out.size(); ++q)
        if (!keep[q]) out[q] = 0.0;
      return out;
    };
    nw = adv(w);
    n3 = adv(s3);
  }
};

Field3 assemble(const Grid& g, const Plane2D& P, const Spec& w, const Spec& s3) {
  Spec u1, u2;
  P.velocity(w, u1, u2);
  PlaneField a(g.nh()), b(g.nh()), c(g.nh());
  a.v = P.to_phys(u1);
  b.v = P.to_phys(u2);
  c.v = P.to_phys(s3);
  return from_planes(g, a, b, c);
}

}  // namespace

Trajectory run_ns2d_reference(const Field3& u0, const SolverConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  const Grid& g = u0.grid();
  const Field3 p0 = u0.as_physical();
  // x3-independence check.
  {
    Field3 d = p0;
    d -= vertical_mean(p0);
    if (norm(d) > 1e-10 * std::max(norm(p0), 1e-300)) throw PreconditionError("ns2d: initial data depends on x3");
  }
  const int nh = g.nh();
  const double h = cfg.dt;
  Plane2D P(nh, cfg.nu, h);
  const Spec a1 = P.to_spec(vertical_mean_plane(p0, 0).v), a2 = P.to_spec(vertical_mean_plane(p0, 1).v);
  Spec s3 = P.to_spec(vertical_mean_plane(p0, 2).v);
  Spec w(a1.size());
  double div = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) {
    w[q] = Complex(0.0, 1.0) * (P.kx[q] * a2[q] - P.ky[q] * a1[q]);
    div += std::norm(P.kx[q] * a1[q] + P.ky[q] * a2[q]);
    scale += P.k2[q] * (std::norm(a1[q]) + std::norm(a2[q]));
  }
  if (div > 1e-16 * std::max(scale, 1e-300)) throw PreconditionError("ns2d: horizontal part is not divergence-free");

  const long nsteps = std::lround((cfg.t_end - opts.t_start) / h);
  if (nsteps < 1) throw InvalidInput("ns2d: t_end must exceed start by at least dt");
  Trajectory traj;
  auto snap = [&](double t) {
    Field3 u = assemble(g, P, w, s3);
    const double e = inner(u, u);
    const double d = 2.0 * cfg.nu * gradient_norm_sq(u);
    DiagnosticRecord r(t);
    r.set(Metric::energy, e);
    r.set(Metric::dissipation, d);
    traj.add_record(r);
    if (opts.log) *opts.log << "ns2d t=" << t << " energy=" << e << " dissipation=" << d << '\n';
    traj.add_snapshot(t, std::move(u));
  };
  snap(opts.t_start);
  auto damp = [&](Spec& f) {
    for (std::size_t q = 0; q < f.size(); ++q) f[q] *= P.decay[q];
  };
  for (long s = 1; s <= nsteps; ++s) {
    Spec nw0, n30, nw1, n31;
    P.advection(w, s3, nw0, n30);
    Spec w1 = w, t1 = s3;
    for (std::size_t q = 0; q < w.size(); ++q) {
      w1[q] += h * nw0[q];
      t1[q] += h * n30[q];
    }
    damp(w1);
    damp(t1);
    P.advection(w1, t1, nw1, n31);
    for (std::size_t q = 0; q < w.size(); ++q) {
      w[q] = (w[q] + 0.5 * h * nw0[q]) * P.decay[q] + 0.5 * h * nw1[q];
      s3[q] = (s3[q] + 0.5 * h * n30[q]) * P.decay[q] + 0.5 * h * n31[q];
    }
    const double t = opts.t_start + double(s) * h;
    for (const Complex& c : w)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw BlowUpError("ns2d: non-finite values", t);
    if (s % cfg.snapshot_stride == 0 || s == nsteps) snap(t);
  }
  return traj;
}

}  // namespace rotasym
