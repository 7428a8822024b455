#include "rotasym/rotation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "rotasym/errors.hpp"
#include "rotasym/spectral.hpp"
#include "rotasym/stepper.hpp"

namespace rotasym {

double divergence_defect(const Field3& u) {
  const double g = std::sqrt(gradient_norm_sq(u));
  if (g == 0.0) return 0.0;
  return norm(divergence(u.is_spectral() ? u : u.as_spectral())) / g;
}

Field3 apply_L(const Field3& u, const RotationProfile& profile, bool check) {
  if (u.grid() != profile.grid()) throw InvalidInput("apply_L: field and profile grids differ");
  if (check && divergence_defect(u) > 1e-8) throw PreconditionError("apply_L: input is not divergence-free");
  const Grid& g = u.grid();
  Field3 f(g, Representation::spectral);
  if (profile.is_constant()) {
    const Field3 s = u.is_spectral() ? u : u.as_spectral();
    const double b0 = profile.b0();
    auto x1 = s.spectral(0), x2 = s.spectral(1);
    auto o1 = f.spectral(0), o2 = f.spectral(1);
    for (std::size_t i = 0; i < x1.size(); ++i) {
      o1[i] = b0 * x2[i];
      o2[i] = -b0 * x1[i];
    }
  } else {
    const auto& b = profile.b().v;
    const int n3 = g.n3();
    std::vector<double> t1(g.size()), t2(g.size());
    if (u.is_physical()) {
      std::copy(u.physical(1).begin(), u.physical(1).end(), t1.begin());
      std::copy(u.physical(0).begin(), u.physical(0).end(), t2.begin());
    } else {  // only the horizontal components are needed
      fft::backward3(g.nh(), g.nh(), n3, u.spectral(1), t1);
      fft::backward3(g.nh(), g.nh(), n3, u.spectral(0), t2);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double bb = b[i / n3];
      t1[i] *= bb;
      t2[i] *= -bb;
    }
    fft::forward3(g.nh(), g.nh(), n3, t1, f.spectral(0));
    fft::forward3(g.nh(), g.nh(), n3, t2, f.spectral(1));
  }
  Field3 out = leray_project(f);
  if (u.is_physical()) out.to_physical();
  return out;
}

double kernel_residual(const Field3& u, const RotationProfile& profile) {
  if (u.grid() != profile.grid()) throw InvalidInput("kernel_residual: field and profile grids differ");
  const double nu = norm(u);
  if (nu == 0.0) return 0.0;
  const Grid& g = u.grid();
  Field3 r = partial(u, 2).to_physical();
  const Field3 p = u.is_physical() ? u : u.as_physical();
  const auto& b = profile.b().v;
  const auto& g1 = profile.grad_b(0).v;
  const auto& g2 = profile.grad_b(1).v;
  const int n3 = g.n3();
  for (int c = 0; c < 3; ++c) {
    auto x = r.physical(c);
    for (std::size_t i = 0; i < g.size(); ++i) x[i] *= b[i / n3];
  }
  auto r3 = r.physical(2);
  auto x1 = p.physical(0), x2 = p.physical(1);
  for (std::size_t i = 0; i < g.size(); ++i) r3[i] -= x1[i] * g1[i / n3] + x2[i] * g2[i / n3];
  return norm(r) / nu;
}

// ---------------------------------------------------------------------------

Field3 KernelData::reconstruct(const Grid& g) const {
  const int nh = g.nh();
  if (stream.nh != nh || alpha.nh != nh) throw InvalidInput("KernelData does not match grid");
  std::vector<Complex> ph(g.plane_size()), t(g.plane_size());
  fft::forward2(nh, stream.v, ph);
  PlaneField v1(nh), v2(nh);
  for (int comp = 0; comp < 2; ++comp) {
    for (int a = 0; a < nh; ++a)
      for (int b = 0; b < nh; ++b) {
        const std::size_t q = std::size_t(a) * nh + b;
        if (Grid::is_nyquist(a, nh) || Grid::is_nyquist(b, nh)) {
          t[q] = 0.0;
          continue;
        }
        // ∇^⊥φ = (∂2 φ, −∂1 φ)
        const double k = comp == 0 ? Grid::deriv_wavenumber(b, nh) : -Grid::deriv_wavenumber(a, nh);
        t[q] = Complex(0.0, k) * ph[q];
      }
    fft::backward2(nh, t, comp == 0 ? v1.v : v2.v);
  }
  return from_planes(g, v1, v2, alpha);
}

struct KernelProjector::Impl {
  RotationProfile profile;
  ProjectorOptions opts;
  int nh;
  bool spectral_only = false;          // no O region: φ free everywhere
  std::vector<std::size_t> free_cells;  // S-cells
  std::vector<std::vector<double>> theta;  // scaled level-set basis on the plane
  std::vector<double> theta_scale;
  double b_lo = 0.0, b_hi = 1.0;
  std::vector<double> k2;  // |k_h|², zero on Nyquist rows
  double diag_delta = 1.0;
  mutable std::atomic<int> last_iters{0};  // diagnostics only

  std::size_t np = 0;

  Impl(const RotationProfile& p, ProjectorOptions o) : profile(p), opts(o), nh(p.grid().nh()) {
    const std::size_t np = p.grid().plane_size();
    k2.assign(np, 0.0);
    double s = 0.0;
    for (int a = 0; a < nh; ++a)
      for (int b = 0; b < nh; ++b) {
        if (Grid::is_nyquist(a, nh) || Grid::is_nyquist(b, nh)) continue;
        const double k1 = Grid::deriv_wavenumber(a, nh), kb = Grid::deriv_wavenumber(b, nh);
        k2[std::size_t(a) * nh + b] = k1 * k1 + kb * kb;
        s += k1 * k1 + kb * kb;
      }
    diag_delta = s / double(np);
    this->np = np;
    std::vector<double> f(np);

    if (p.count(Region::regular) == 0) {
      spectral_only = true;
      return;
    }
    for (std::size_t q = 0; q < np; ++q)
      if (p.regions()[q] == Region::singular) free_cells.push_back(q);

    // Θ_j(x) = ∫_{-1}^{x} P_j, x = normalized b; Θ_j vanishes where b = b_min.
    b_lo = p.b_min();
    b_hi = p.b_max();
    const int nb = p.params().n_bins;
    for (int j = 0; j < nb; ++j) {
      std::vector<double> th(np);
      for (std::size_t q = 0; q < np; ++q) {
        const double x = std::clamp(2.0 * (p.b().v[q] - b_lo) / (b_hi - b_lo) - 1.0, -1.0, 1.0);
        th[q] = j == 0 ? x + 1.0
                       : (std::legendre(j + 1, x) - std::legendre(j - 1, x)) / double(2 * j + 1);
      }
      laplace_h(th, f);
      double a = 0.0;
      for (std::size_t q = 0; q < np; ++q) a += th[q] * f[q];
      if (!(a > 1e-14)) continue;
      const double sc = 1.0 / std::sqrt(a);
      for (double& v : th) v *= sc;
      theta.push_back(std::move(th));
      theta_scale.push_back(sc);
    }
  }

  std::size_t n_unknowns() const { return free_cells.size() + theta.size(); }

  // out = −Δ_h in (Nyquist rows removed)
  void laplace_h(const std::vector<double>& in, std::vector<double>& out) const {
    std::vector<Complex> sh(np);
    fft::forward2(nh, in, sh);
    for (std::size_t q = 0; q < sh.size(); ++q) sh[q] *= k2[q];
    fft::backward2(nh, sh, out);
  }

  void expand(const std::vector<double>& c, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < free_cells.size(); ++s) out[free_cells[s]] = c[s];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double cj = c[free_cells.size() + j];
      const auto& th = theta[j];
      for (std::size_t q = 0; q < out.size(); ++q) out[q] += cj * th[q];
    }
  }

  void restrict(const std::vector<double>& in, std::vector<double>& c) const {
    for (std::size_t s = 0; s < free_cells.size(); ++s) c[s] = in[free_cells[s]];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      double acc = 0.0;
      const auto& th = theta[j];
      for (std::size_t q = 0; q < in.size(); ++q) acc += th[q] * in[q];
      c[free_cells.size() + j] = acc;
    }
  }

  void normal_op(const std::vector<double>& c, std::vector<double>& out) const {
    std::vector<double> phi(np), f(np);
    expand(c, phi);
    laplace_h(phi, f);
    restrict(f, out);
  }

  // ζ = ∂1 v2 − ∂2 v1 = D^T v
  void vorticity(const PlaneField& v1, const PlaneField& v2, std::vector<double>& out) const {
    std::vector<Complex> a(np), b(np), st(np);
    fft::forward2(nh, v1.v, a);
    fft::forward2(nh, v2.v, b);
    for (int i = 0; i < nh; ++i)
      for (int j = 0; j < nh; ++j) {
        const std::size_t q = std::size_t(i) * nh + j;
        if (Grid::is_nyquist(i, nh) || Grid::is_nyquist(j, nh)) {
          st[q] = 0.0;
          continue;
        }
        st[q] = Complex(0.0, 1.0) * (Grid::deriv_wavenumber(i, nh) * b[q] - Grid::deriv_wavenumber(j, nh) * a[q]);
      }
    fft::backward2(nh, st, out);
  }

  // Solves for φ; returns coefficient vector (empty on the spectral path).
  std::vector<double> solve(const PlaneField& v1, const PlaneField& v2, std::vector<double>& phi_out) const {
    std::vector<double> zeta(np);
    vorticity(v1, v2, zeta);
    phi_out.assign(np, 0.0);
    if (spectral_only) {
      std::vector<Complex> st(np);
      fft::forward2(nh, zeta, st);
      for (std::size_t q = 0; q < np; ++q) st[q] = k2[q] > 0.0 ? st[q] / k2[q] : Complex(0.0);
      fft::backward2(nh, st, phi_out);
      last_iters = 0;
      return {};
    }
    const std::size_t n = n_unknowns();
    std::vector<double> rhs(n), x(n, 0.0), r(n), z(n), p(n), ap(n);
    restrict(zeta, rhs);
    double rhs_norm = 0.0;
    for (double v : rhs) rhs_norm += v * v;
    rhs_norm = std::sqrt(rhs_norm);
    last_iters = 0;
    if (rhs_norm == 0.0) return x;
    // Inputs already orthogonal to the range (e.g. Π⊥u) have a roundoff-level
    // right-hand side; measure the residual against the vorticity instead.
    double zeta_norm = 0.0;
    for (double v : zeta) zeta_norm += v * v;
    const double ref = std::max(rhs_norm, 1e-3 * std::sqrt(zeta_norm));
    const std::size_t ns = free_cells.size();
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = i < ns ? in[i] / diag_delta : in[i];
    };
    r = rhs;
    precond(r, z);
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];
    double rn = rhs_norm;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      if (rn <= opts.tol * ref) break;
      normal_op(p, ap);
      double pap = 0.0;
      for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      rn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
        rn += r[i] * r[i];
      }
      rn = std::sqrt(rn);
      precond(r, z);
      double rz_new = 0.0;
      for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    last_iters = it;
    if (rn > opts.tol * ref) {
      std::ostringstream os;
      os << "kernel projection: CG stopped at relative residual " << rn / ref << " after " << it
         << " iterations (tolerance " << opts.tol << ")";
      throw ConvergenceError(os.str(), rn / ref, it);
    }
    expand(x, phi_out);
    return x;
  }

  void perp_grad(const std::vector<double>& ph_in, PlaneField& o1, PlaneField& o2) const {
    std::vector<Complex> sh(np), st(np);
    fft::forward2(nh, ph_in, sh);
    o1 = PlaneField(nh);
    o2 = PlaneField(nh);
    for (int comp = 0; comp < 2; ++comp) {
      for (int a = 0; a < nh; ++a)
        for (int b = 0; b < nh; ++b) {
          const std::size_t q = std::size_t(a) * nh + b;
          if (Grid::is_nyquist(a, nh) || Grid::is_nyquist(b, nh)) {
            st[q] = 0.0;
            continue;
          }
          const double k = comp == 0 ? Grid::deriv_wavenumber(b, nh) : -Grid::deriv_wavenumber(a, nh);
          st[q] = Complex(0.0, k) * sh[q];
        }
      fft::backward2(nh, st, comp == 0 ? o1.v : o2.v);
    }
  }
};

KernelProjector::KernelProjector(const RotationProfile& profile, ProjectorOptions opts)
    : impl_(std::make_unique<Impl>(profile, opts)) {}
KernelProjector::~KernelProjector() = default;
KernelProjector::KernelProjector(KernelProjector&&) noexcept = default;
KernelProjector& KernelProjector::operator=(KernelProjector&&) noexcept = default;

const RotationProfile& KernelProjector::profile() const { return impl_->profile; }
std::size_t KernelProjector::unknowns() const { return impl_->n_unknowns(); }
int KernelProjector::last_iterations() const { return impl_->last_iters; }

void KernelProjector::project_plane(const PlaneField& v1, const PlaneField& v2, PlaneField& o1,
                                    PlaneField& o2) const {
  if (v1.nh != impl_->nh || v2.nh != impl_->nh) throw InvalidInput("project_plane: size mismatch");
  std::vector<double> phi;
  impl_->solve(v1, v2, phi);
  impl_->perp_grad(phi, o1, o2);
}

Field3 KernelProjector::apply(const Field3& u, bool check) const {
  if (u.grid() != impl_->profile.grid()) throw InvalidInput("kernel projection: field and profile grids differ");
  if (check && divergence_defect(u) > 1e-8) throw PreconditionError("kernel projection: input is not divergence-free");
  const Grid& g = u.grid();
  PlaneField m1 = vertical_mean_plane(u, 0), m2 = vertical_mean_plane(u, 1), m3 = vertical_mean_plane(u, 2);
  PlaneField o1, o2;
  project_plane(m1, m2, o1, o2);
  Field3 out = from_planes(g, o1, o2, m3);
  if (u.is_spectral()) out.to_spectral();
  return out;
}

KernelData KernelProjector::decompose(const Field3& u, bool check) const {
  if (u.grid() != impl_->profile.grid()) throw InvalidInput("kernel projection: field and profile grids differ");
  if (check && divergence_defect(u) > 1e-8) throw PreconditionError("kernel projection: input is not divergence-free");
  const Impl& m = *impl_;
  KernelData kd;
  kd.alpha = vertical_mean_plane(u, 2);
  PlaneField m1 = vertical_mean_plane(u, 0), m2 = vertical_mean_plane(u, 1);
  kd.stream = PlaneField(m.nh);
  std::vector<double> c = m.solve(m1, m2, kd.stream.v);
  kd.iterations = m.last_iters;
  kd.stream_singular = PlaneField(m.nh);
  if (!m.spectral_only) {
    for (std::size_t s = 0; s < m.free_cells.size(); ++s) kd.stream_singular.v[m.free_cells[s]] = c[s];
    const std::size_t ns = m.free_cells.size();
    for (std::size_t j = 0; j < m.theta.size(); ++j) kd.level_coefficients.push_back(c[ns + j] * m.theta_scale[j]);
    // G'(b) = Σ c_j P_j(x) dx/db
    const double dxdb = 2.0 / (m.b_hi - m.b_lo);
    for (const LevelBin& bin : m.profile.bins()) {
      const double bm = 0.5 * (bin.b_lo + bin.b_hi);
      const double x = 2.0 * (bm - m.b_lo) / (m.b_hi - m.b_lo) - 1.0;
      double F = 0.0;
      for (std::size_t j = 0; j < kd.level_coefficients.size(); ++j)
        F += kd.level_coefficients[j] * std::legendre(unsigned(j), x) * dxdb;
      kd.bin_F.push_back(F);
    }
  } else {
    kd.stream_singular = kd.stream;
  }
  return kd;
}

Field3 kernel_project_geometric(const Field3& u, const RotationProfile& profile) {
  return KernelProjector(profile).apply(u);
}

Field3 pi_perp(const Field3& u, const KernelProjector& projector) {
  Field3 out = u;
  out -= projector.apply(u);
  return out;
}

Field3 pi_perp(const Field3& u, const RotationProfile& profile) { return pi_perp(u, KernelProjector(profile)); }

// ---------------------------------------------------------------------------

std::vector<Field3> kernel_project_ergodic(const Field3& u, const RotationProfile& profile,
                                           const std::vector<double>& horizons, double dt,
                                           const ErgodicOptions& opts) {
  if (!(dt > 0.0)) throw InvalidInput("ergodic projection: dt must be positive");
  std::vector<long> marks;
  long prev = 0;
  for (double T : horizons) {
    const long n = std::lround(T / dt);
    if (n <= prev || std::abs(n * dt - T) > 1e-9 * T)
      throw InvalidInput("ergodic projection: horizons must be increasing multiples of dt");
    marks.push_back(n);
    prev = n;
  }
  if (divergence_defect(u) > 1e-8) throw PreconditionError("ergodic projection: input is not divergence-free");
  Field3 v = u.as_spectral();
  Field3 acc = v;
  acc *= 0.5;
  std::vector<Field3> out;
  double e_prev = inner(v, v);
  std::size_t next = 0;
  for (long n = 1; next < marks.size(); ++n) {
    v = step_rotation_group(v, dt, opts.eps, profile);
    const double e = inner(v, v);
    if (std::abs(e - e_prev) > opts.energy_tol * std::max(e_prev, 1e-300))
      throw IntegratorError("ergodic projection: energy drift " + std::to_string(std::abs(e - e_prev) / e_prev) +
                            " exceeds tolerance at step " + std::to_string(n));
    e_prev = e;
    acc += v;
    if (n == marks[next]) {
      Field3 avg = acc;
      avg.axpy(-0.5, v);
      avg *= 1.0 / double(n);
      if (u.is_physical()) avg.to_physical();
      out.push_back(std::move(avg));
      ++next;
    }
  }
  return out;
}

Field3 kernel_project_ergodic(const Field3& u, const RotationProfile& profile, double T, double dt) {
  return kernel_project_ergodic(u, profile, std::vector<double>{T}, dt).front();
}

template <int N>
static Field<N> antiderivative_impl(const Field<N>& w) {
  const Grid& g = w.grid();
  Field<N> s = w.as_spectral();
  const double total = norm(s);
  double mean_sq = 0.0;
  for (int c = 0; c < N; ++c) {
    auto x = s.spectral(c);
    for (std::size_t i = 0; i < x.size(); i += g.n3()) mean_sq += std::norm(x[i]);
  }
  if (total > 0.0 && std::sqrt(mean_sq * g.volume()) > 1e-8 * total)
    throw PreconditionError("vertical_antiderivative: input has nonzero vertical mean");
  for (int c = 0; c < N; ++c) {
    auto x = s.spectral(c);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double k3 = Grid::deriv_wavenumber(int(i % g.n3()), g.n3());
      x[i] = k3 == 0.0 ? Complex(0.0) : x[i] / Complex(0.0, k3);
    }
  }
  if (w.is_physical()) s.to_physical();
  return s;
}

Field3 vertical_antiderivative(const Field3& w) { return antiderivative_impl(w); }
ScalarField vertical_antiderivative(const ScalarField& w) { return antiderivative_impl(w); }

}  // namespace rotasym
