#include "rotasym/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "rotasym/errors.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/spectral.hpp"

namespace rotasym {

EnergyReport energy_report(const Field3& u, double nu) {
  return {inner(u, u), 2.0 * nu * gradient_norm_sq(u)};
}

double rotational_identity_residual(const Field3& u, bool dealiased) {
  const Grid& g = u.grid();
  const Field3 p = u.as_physical();
  Field3 lhs = cross(p, curl(p));

  // ∇(|u|²/2)
  ScalarField half(g);
  {
    auto h = half.physical(0);
    for (int c = 0; c < 3; ++c) {
      auto x = p.physical(c);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] += 0.5 * x[i] * x[i];
    }
  }
  Field3 rhs = gradient(half);
  // − ∇·(u⊗u): component i is −Σ_j ∂_j(u_i u_j)
  for (int i = 0; i < 3; ++i) {
    auto r = rhs.physical(i);
    for (int j = 0; j < 3; ++j) {
      ScalarField prod(g);
      auto q = prod.physical(0);
      auto a = p.physical(i), b = p.physical(j);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = a[k] * b[k];
      ScalarField d = partial(prod, j);
      auto dv = d.physical(0);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= dv[k];
    }
  }
  // + u ∇·u
  ScalarField dv = divergence(p);
  for (int i = 0; i < 3; ++i) {
    auto r = rhs.physical(i);
    auto a = p.physical(i);
    auto d = dv.physical(0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += a[k] * d[k];
  }
  if (dealiased) {
    lhs = dealias(lhs);
    rhs = dealias(rhs);
  }
  const double scale = std::max(norm(lhs), norm(rhs));
  if (scale == 0.0) return 0.0;
  Field3 diff = lhs;
  diff -= rhs;
  return norm(diff) / scale;
}

AlignmentResult alignment_error(const Field3& u, const RotationProfile& profile) {
  if (u.grid() != profile.grid()) throw InvalidInput("alignment_error: grids differ");
  AlignmentResult res;
  if (profile.count(Region::regular) == 0) {
    res.empty_region = true;
    return res;
  }
  const PlaneField m1 = vertical_mean_plane(u, 0), m2 = vertical_mean_plane(u, 1);
  const auto& g1 = profile.grad_b(0).v;
  const auto& g2 = profile.grad_b(1).v;
  double along = 0.0, total = 0.0;
  for (std::size_t q = 0; q < m1.size(); ++q) {
    if (profile.regions()[q] != Region::regular) continue;
    const double gn = std::hypot(g1[q], g2[q]);
    total += m1.v[q] * m1.v[q] + m2.v[q] * m2.v[q];
    if (gn > 0.0) {
      const double a = (m1.v[q] * g1[q] + m2.v[q] * g2[q]) / gn;
      along += a * a;
    }
  }
  res.value = total > 0.0 ? std::sqrt(along / total) : 0.0;
  return res;
}

// ---------------------------------------------------------------------------

void TestFunctionSet::add(TestFunction f) {
  f.chi.to_physical();
  const double n = norm(f.chi);
  if (n == 0.0) throw InvalidInput("test function is zero");
  f.chi *= 1.0 / n;
  items_.push_back(std::move(f));
}

std::vector<const TestFunction*> TestFunctionSet::tagged(TestTag t) const {
  std::vector<const TestFunction*> out;
  for (const auto& f : items_)
    if (f.tag == t) out.push_back(&f);
  return out;
}

TestFunctionSet TestFunctionSet::standard(const RotationProfile& profile, std::uint64_t seed) {
  const Grid& g = profile.grid();
  const int nh = g.nh();
  TestFunctionSet set;
  auto plane = [&](auto fn) {
    PlaneField p(nh);
    for (int a = 0; a < nh; ++a)
      for (int b = 0; b < nh; ++b) p(a, b) = fn(g.coord_h(a), g.coord_h(b));
    return p;
  };
  auto stream_field = [&](const PlaneField& psi, const PlaneField& alpha) {
    KernelData kd;
    kd.stream = psi;
    kd.alpha = alpha;
    return kd.reconstruct(g);
  };
  const PlaneField zero(nh);
  if (profile.count(Region::regular) > 0) {
    const Field3 perp_b = stream_field(profile.b_smooth(), zero);
    set.add({"perp_grad_b", TestTag::kernel, perp_b});
    set.add({"alpha_cos_x1", TestTag::kernel,
             stream_field(zero, plane([](double x, double) { return std::cos(x); }))});
    set.add({"alpha_sin_x1_plus_x2", TestTag::kernel,
             stream_field(zero, plane([](double x, double y) { return std::sin(x + y); }))});
    Field3 mix = perp_b;
    mix *= 1.0 / norm(perp_b);
    Field3 a = stream_field(zero, plane([](double, double y) { return std::cos(2 * y); }));
    mix.axpy(1.0 / norm(a), a);
    set.add({"perp_grad_b_plus_alpha", TestTag::kernel, mix});
  } else {
    set.add({"perp_cos_x1", TestTag::kernel, stream_field(plane([](double x, double) { return std::cos(x); }), zero)});
    set.add({"perp_sin_x1_plus_x2", TestTag::kernel,
             stream_field(plane([](double x, double y) { return std::sin(x + y); }), zero)});
    set.add({"alpha_cos_x2", TestTag::kernel,
             stream_field(zero, plane([](double, double y) { return std::cos(y); }))});
    set.add({"alpha_sin_x1_minus_x2", TestTag::kernel,
             stream_field(zero, plane([](double x, double y) { return std::sin(x - y); }))});
  }
  for (int i = 0; i < 4; ++i) {
    RandomSpectrum spec;
    spec.seed = seed + std::uint64_t(i);
    spec.slope = 0.0;
    spec.band = 3;
    set.add({"generic_" + std::to_string(i), TestTag::generic, random_divergence_free(g, spec)});
  }
  return set;
}

// ---------------------------------------------------------------------------

Field3 rotational_product(const Field3& a, const Field3& b) {
  return dealias(cross(a.as_physical(), curl(b).to_physical()).to_spectral());
}

double CouplingPairing::max_abs() const {
  double m = 0.0;
  for (double v : variable_form) m = std::max(m, std::abs(v));
  return m;
}

CouplingPairing coupling_pairing(const Field3& w, const KernelProjector& projector, const TestFunctionSet& tests) {
  CouplingPairing out;
  const Field3 prod = rotational_product(w, w);
  const Field3 pi_prod = projector.apply(leray_project(prod), false);
  const Field3 mean = leray_project(vertical_mean(prod));
  for (const TestFunction* f : tests.tagged(TestTag::kernel)) {
    out.variable_form.push_back(inner(pi_prod, f->chi));
    out.constant_form.push_back(inner(mean, f->chi));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct OscState {
  Field3 w;        // Π_⊥ u
  Field3 q;        // (w_h − ∇_h W3, 0)
  ScalarField z;   // ∂2 w1 − ∂1 w2
};

OscState osc_state(const Field3& u, const KernelProjector& projector) {
  const Grid& g = u.grid();
  OscState s{pi_perp(u.as_physical(), projector), Field3(g), ScalarField(g)};
  Field3 w3only(g);
  {
    auto src = s.w.physical(2);
    auto dst = w3only.physical(2);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  ScalarField W3(g);
  {
    Field3 W = vertical_antiderivative(w3only);
    auto src = W.physical(2);
    auto dst = W3.physical(0);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  Field3 gW = gradient(W3, true);
  s.q = s.w;
  s.q -= gW;
  std::fill(s.q.physical(2).begin(), s.q.physical(2).end(), 0.0);
  ScalarField d2w1(g), d1w2(g);
  Field3 p2 = partial(s.w, 1), p1 = partial(s.w, 0);
  auto zz = s.z.physical(0);
  auto a = p2.physical(0), b = p1.physical(1);
  for (std::size_t i = 0; i < zz.size(); ++i) zz[i] = a[i] - b[i];
  return s;
}

}  // namespace

std::vector<OscillationSample> oscillation_residual(const Trajectory& traj, double eps, const RotationProfile& profile,
                                                    const KernelProjector& projector, const TestFunctionSet& tests) {
  std::vector<OscillationSample> out;
  const std::size_t n = traj.size();
  if (n < 3) return out;
  const auto& t = traj.times();
  const double tau = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((t[i + 1] - t[i]) - tau) > 1e-9 * tau) throw SamplingError("oscillation_residual: snapshots are not uniformly spaced");
  const double bmax = std::max(std::abs(profile.b_max()), std::abs(profile.b_min()));
  if (tau * bmax / eps > 0.5)
    throw SamplingError("oscillation_residual: snapshot spacing too coarse for centered differencing (tau*b/eps = " +
                        std::to_string(tau * bmax / eps) + ")");
  const Grid& g = profile.grid();
  const auto& b = profile.b().v;
  const int n3 = g.n3();

  std::vector<OscState> st;
  st.reserve(n);
  for (std::size_t i = 0; i < n; ++i) st.push_back(osc_state(traj.snapshot(i), projector));

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c = eps / (t[i + 1] - t[i - 1]);
    // r̃ = ε ∂t q + b (w2, −w1)
    Field3 r = st[i + 1].q;
    r -= st[i - 1].q;
    r *= c;
    {
      auto r1 = r.physical(0), r2 = r.physical(1);
      auto w1 = st[i].w.physical(0), w2 = st[i].w.physical(1);
      for (std::size_t k = 0; k < r1.size(); ++k) {
        r1[k] += b[k / n3] * w2[k];
        r2[k] -= b[k / n3] * w1[k];
      }
    }
    // s̃ = ε ∂t z + div_h(b w_h)
    ScalarField s = st[i + 1].z;
    s -= st[i - 1].z;
    s *= c;
    {
      Field3 bw(g);
      auto o1 = bw.physical(0), o2 = bw.physical(1);
      auto w1 = st[i].w.physical(0), w2 = st[i].w.physical(1);
      for (std::size_t k = 0; k < o1.size(); ++k) {
        o1[k] = b[k / n3] * w1[k];
        o2[k] = b[k / n3] * w2[k];
      }
      s += divergence(bw);
    }
    OscillationSample smp;
    smp.time = t[i];
    for (const auto& f : tests.all()) {
      const double rp = inner(r, f.chi);
      ScalarField chi3(g);
      auto src = f.chi.physical(2);
      std::copy(src.begin(), src.end(), chi3.physical(0).begin());
      const double sp = inner(s, chi3);
      smp.r_pairing.push_back(rp);
      smp.s_pairing.push_back(sp);
      smp.max_abs = std::max({smp.max_abs, std::abs(rp), std::abs(sp)});
    }
    out.push_back(std::move(smp));
  }
  return out;
}

// ---------------------------------------------------------------------------

double SpaceTimeTest::theta(double t) const {
  if (t >= t_cut) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t / t_cut));
}

double SpaceTimeTest::theta_dot(double t) const {
  if (t >= t_cut) return 0.0;
  return -0.5 * std::numbers::pi / t_cut * std::sin(std::numbers::pi * t / t_cut);
}

double weak_form_residual(const Trajectory& traj, const SpaceTimeTest& phi, double nu, const WeakFormOptions& opts) {
  if (traj.size() < 2) throw InvalidInput("weak_form_residual: trajectory needs at least two snapshots");
  if (phi.t_cut > traj.final_time() * (1.0 + 1e-12) || traj.times().front() != 0.0)
    throw InvalidInput("weak_form_residual: test function support exceeds the trajectory span");
  const Field3 chi = phi.chi.as_physical();
  const Grid& g = chi.grid();
  // ∂_j χ_i
  Field3 dchi[3] = {partial(chi, 0), partial(chi, 1), partial(chi, 2)};
  for (auto& f : dchi) f.to_physical();
  const Field3 lap = laplacian(chi);

  auto integrand = [&](const Field3& u0, double t) {
    const Field3 u = u0.as_physical();
    double v = -inner(u, chi) * phi.theta_dot(t);
    const double th = phi.theta(t);
    if (th == 0.0) return v;
    double s = -nu * inner(u, lap);  // ν⟨∇u, ∇χ⟩
    if (opts.nonlinear) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          auto ui = u.physical(i), uj = u.physical(j);
          std::span<const double> d = dchi[j].physical(i);
          for (std::size_t k = 0; k < ui.size(); ++k) acc += ui[k] * uj[k] * d[k];
        }
      s -= acc * g.cell_volume();
    }
    if (opts.coriolis) {
      const auto& b = opts.coriolis->b().v;
      const int n3 = g.n3();
      auto u1 = u.physical(0), u2 = u.physical(1);
      auto c1 = chi.physical(0), c2 = chi.physical(1);
      double acc = 0.0;
      for (std::size_t k = 0; k < u1.size(); ++k) acc += b[k / n3] * (u2[k] * c1[k] - u1[k] * c2[k]);
      s += acc * g.cell_volume() / opts.eps;
    }
    return v + th * s;
  };
  const auto& t = traj.times();
  double total = 0.0;
  double prev = integrand(traj.snapshot(0), t[0]);
  for (std::size_t i = 1; i < traj.size() && t[i - 1] < phi.t_cut; ++i) {
    const double cur = integrand(traj.snapshot(i), t[i]);
    total += 0.5 * (t[i] - t[i - 1]) * (prev + cur);
    prev = cur;
  }
  return total - inner(traj.snapshot(0).as_physical(), chi) * phi.theta(0.0);
}

// ---------------------------------------------------------------------------

HeatIdentityResult heat_identity_check(const Field3& ubar, const KernelProjector& projector, double tol_kernel,
                                       double support_tol) {
  HeatIdentityResult res;
  const RotationProfile& prof = projector.profile();
  const Grid& g = ubar.grid();
  // Horizontal part of the vertical mean.
  PlaneField z(g.nh());
  Field3 uh = from_planes(g, vertical_mean_plane(ubar, 0), vertical_mean_plane(ubar, 1), z);
  const double grad_total = gradient_norm_sq(uh);
  if (grad_total == 0.0) {
    res.status = HeatIdentityResult::Status::zero_field;
    return res;
  }
  {
    Field3 d = ubar;
    d -= projector.apply(ubar, false);
    res.range_defect = norm(d) / norm(ubar);
  }
  const Field3 up = uh.as_physical();
  const int n3 = g.n3();
  double out_sq = 0.0, all_sq = 0.0;
  for (int c = 0; c < 2; ++c) {
    auto x = up.physical(c);
    for (std::size_t k = 0; k < x.size(); ++k) {
      all_sq += x[k] * x[k];
      if (prof.regions()[k / n3] != Region::regular) out_sq += x[k] * x[k];
    }
  }
  res.outside_fraction = all_sq > 0.0 ? out_sq / all_sq : 0.0;
  if (res.outside_fraction > support_tol) {
    res.status = HeatIdentityResult::Status::outside_regular_set;
    res.gap = std::nan("");
    return res;
  }
  // O-restricted pairings.
  auto masked_inner = [&](const Field3& a, const Field3& b) {
    const Field3 pa = a.as_physical(), pb = b.as_physical();
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      auto x = pa.physical(c), y = pb.physical(c);
      for (std::size_t k = 0; k < x.size(); ++k)
        if (prof.regions()[k / n3] == Region::regular) s += x[k] * y[k];
    }
    return s * g.cell_volume();
  };
  const Field3 pi_lap = projector.apply(laplacian(up, true), false);
  const double lhs = -masked_inner(pi_lap, up);
  double grad_o = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const Field3 d = partial(up, axis);
    grad_o += masked_inner(d, d);
  }
  res.gap = std::abs(lhs - grad_o) / grad_total;
  if (res.range_defect > tol_kernel) res.status = HeatIdentityResult::Status::not_in_range;
  return res;
}

// ---------------------------------------------------------------------------

Field3 time_average(const Trajectory& traj) {
  if (traj.size() == 0) throw InvalidInput("time_average: empty trajectory");
  if (traj.size() == 1) return traj.snapshot(0).as_physical();
  const auto& t = traj.times();
  Field3 acc(traj.snapshot(0).grid());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double w = 0.5 * (t[i] - t[i - 1]);
    acc.axpy(w, traj.snapshot(i - 1).as_physical());
    acc.axpy(w, traj.snapshot(i).as_physical());
  }
  acc *= 1.0 / (t.back() - t.front());
  return acc;
}

namespace {

double masked_norm(const Field3& u, const RotationProfile& prof) {
  const Field3 p = u.as_physical();
  const int n3 = p.grid().n3();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = p.physical(c);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (prof.regions()[k / n3] != Region::band) s += x[k] * x[k];
  }
  return std::sqrt(s * p.grid().cell_volume());
}

// Trapezoid time average of f(snapshot i).
template <class F>
double trapezoid_mean(const std::vector<double>& t, F&& f) {
  if (t.size() < 2) return f(0);
  double acc = 0.0, prev = f(0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double cur = f(i);
    acc += 0.5 * (t[i] - t[i - 1]) * (prev + cur);
    prev = cur;
  }
  return acc / (t.back() - t.front());
}

}  // namespace

ConvergenceTable convergence_study(const std::vector<double>& eps_list, const SolverConfig& cfg,
                                   const RotationProfile& profile, const Field3& u0, std::ostream* log) {
  if (eps_list.size() < 3) throw InvalidInput("convergence_study: need at least 3 values of eps");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1])) throw InvalidInput("convergence_study: eps_list must be decreasing");
  ConvergenceTable table;
  const KernelProjector projector(profile);
  const TestFunctionSet tests = TestFunctionSet::standard(profile);
  RunOptions quiet;
  quiet.log = log;
  table.limit = run_limit_system(u0, cfg, profile, &projector, quiet);
  const Trajectory& lim = table.limit;

  for (double eps : eps_list) {
    ConvergenceRow row;
    row.eps = eps;
    try {
      SolverConfig c = cfg;
      c.eps = eps;
      const Trajectory tr = run_rotating_ns(u0, c, profile, quiet);
      if (tr.size() != lim.size()) throw Error("convergence_study: snapshot times of the runs differ");
      const Field3 pu = projector.apply(tr.final_state(), false);
      Field3 d = pu;
      d -= lim.final_state();
      row.e_strong = norm(d);
      row.e_strong_masked = masked_norm(d, profile);
      for (const TestFunction* f : tests.tagged(TestTag::generic)) {
        const double m = trapezoid_mean(tr.times(), [&](std::size_t i) {
          return inner(tr.snapshot(i), f->chi) - inner(lim.snapshot(i), f->chi);
        });
        row.e_weak = std::max(row.e_weak, std::abs(m));
      }
      row.alignment = alignment_error(time_average(tr), profile).value;
      row.alignment_projected = alignment_error(pu, profile).value;
      std::vector<CouplingPairing> cp;
      for (std::size_t i = 0; i < tr.size(); ++i) cp.push_back(coupling_pairing(pi_perp(tr.snapshot(i), projector), projector, tests));
      for (std::size_t j = 0; j < cp.front().variable_form.size(); ++j) {
        const double m = trapezoid_mean(tr.times(), [&](std::size_t i) { return cp[i].variable_form[j]; });
        row.coupling = std::max(row.coupling, std::abs(m));
      }
      row.energy_final = inner(tr.final_state(), tr.final_state());
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
      if (log) *log << "convergence: eps=" << eps << " failed: " << e.what() << '\n';
    }
    if (log)
      *log << "convergence: eps=" << eps << " e_strong=" << row.e_strong << " e_weak=" << row.e_weak
           << " alignment=" << row.alignment << " coupling=" << row.coupling << '\n';
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace rotasym
