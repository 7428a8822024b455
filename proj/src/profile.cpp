#include "rotasym/profile.hpp"

#include <algorithm>
#include <cmath>

#include "rotasym/errors.hpp"

namespace rotasym {
namespace {

double wrap(double d) {
  const double L = 2 * std::numbers::pi;
  d = std::fmod(d + std::numbers::pi, L);
  if (d < 0) d += L;
  return d - std::numbers::pi;
}

}  // namespace

RotationProfile RotationProfile::radial(const Grid& g, const RadialParams& p) {
  if (!(p.b0 > 0.0)) throw InvalidProfile("b0 must be positive");
  if (!(p.radius > 0.0 && p.radius < std::numbers::pi)) throw InvalidInput("bump radius must lie in (0, pi)");
  if (p.n_bins < 4) throw InvalidInput("n_bins must be >= 4");
  if (!(p.tol_grad > 0.0)) throw InvalidInput("tol_grad must be positive");
  if (p.b0 + std::min(0.0, p.amplitude) <= 0.0) throw InvalidProfile("rotation profile vanishes or changes sign");

  RotationProfile prof(g);
  prof.params_ = p;
  const int nh = g.nh();
  prof.b_ = PlaneField(nh, p.b0);
  prof.grad_mag_ = PlaneField(nh);
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b) {
      const double dx = wrap(g.coord_h(a) - p.center_x), dy = wrap(g.coord_h(b) - p.center_y);
      const double s = std::hypot(dx, dy) / p.radius;
      if (s >= 1.0 || p.amplitude == 0.0) continue;
      const double q = 1.0 - s * s;
      const double chi = std::exp(1.0 - 1.0 / q);
      prof.b_(a, b) = p.b0 + p.amplitude * chi;
      prof.grad_mag_(a, b) = std::abs(p.amplitude * chi * 2.0 * s / (q * q)) / p.radius;
    }
  auto [mn, mx] = std::minmax_element(prof.b_.v.begin(), prof.b_.v.end());
  prof.b_min_ = *mn;
  prof.b_max_ = *mx;
  if (prof.b_min_ <= 0.0) throw InvalidProfile("rotation profile vanishes somewhere");

  // Nyquist-free b and its spectral gradient.
  std::vector<Complex> bh(g.plane_size()), t(g.plane_size());
  fft::forward2(nh, prof.b_.v, bh);
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b)
      if (Grid::is_nyquist(a, nh) || Grid::is_nyquist(b, nh)) bh[std::size_t(a) * nh + b] = 0.0;
  prof.b_smooth_ = PlaneField(nh);
  prof.grad1_ = PlaneField(nh);
  prof.grad2_ = PlaneField(nh);
  fft::backward2(nh, bh, prof.b_smooth_.v);
  for (int comp = 0; comp < 2; ++comp) {
    for (int a = 0; a < nh; ++a)
      for (int b = 0; b < nh; ++b) {
        const double k = Grid::deriv_wavenumber(comp == 0 ? a : b, nh);
        t[std::size_t(a) * nh + b] = Complex(0.0, k) * bh[std::size_t(a) * nh + b];
      }
    fft::backward2(nh, t, comp == 0 ? prof.grad1_.v : prof.grad2_.v);
  }

  const double gmax = *std::max_element(prof.grad_mag_.v.begin(), prof.grad_mag_.v.end());
  prof.tol_abs_ = p.tol_grad * gmax;
  prof.regions_.assign(g.plane_size(), Region::singular);
  if (gmax > 0.0)
    for (std::size_t q = 0; q < g.plane_size(); ++q)
      if (prof.grad_mag_.v[q] > prof.tol_abs_) prof.regions_[q] = Region::regular;
  // Threshold-S cells touching O form the interface band.
  std::vector<Region> marked = prof.regions_;
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b) {
      if (prof.region(a, b) != Region::singular) continue;
      bool touches = false;
      for (int da = -1; da <= 1 && !touches; ++da)
        for (int db = -1; db <= 1 && !touches; ++db)
          touches = prof.region((a + da + nh) % nh, (b + db + nh) % nh) == Region::regular;
      if (touches) marked[std::size_t(a) * nh + b] = Region::band;
    }
  prof.regions_ = std::move(marked);

  // Equal-b-range annuli over O.
  double lo = 1e300, hi = -1e300;
  for (std::size_t q = 0; q < g.plane_size(); ++q)
    if (prof.regions_[q] == Region::regular) {
      lo = std::min(lo, prof.b_.v[q]);
      hi = std::max(hi, prof.b_.v[q]);
    }
  if (lo <= hi) {
    const double w = (hi - lo) / p.n_bins;
    prof.bins_.resize(p.n_bins);
    for (int j = 0; j < p.n_bins; ++j) {
      prof.bins_[j].b_lo = lo + j * w;
      prof.bins_[j].b_hi = j + 1 == p.n_bins ? hi : lo + (j + 1) * w;
    }
    for (std::size_t q = 0; q < g.plane_size(); ++q) {
      if (prof.regions_[q] != Region::regular) continue;
      int j = w > 0 ? int((prof.b_.v[q] - lo) / w) : 0;
      j = std::clamp(j, 0, p.n_bins - 1);
      prof.bins_[j].cells.push_back(q);
      prof.bins_[j].grad1.push_back(prof.grad1_.v[q]);
      prof.bins_[j].grad2.push_back(prof.grad2_.v[q]);
    }
  }
  return prof;
}

RotationProfile RotationProfile::constant(const Grid& g, double b0, int n_bins) {
  RadialParams p;
  p.b0 = b0;
  p.amplitude = 0.0;
  p.n_bins = n_bins;
  return radial(g, p);
}

ScalarField RotationProfile::b_field() const { return from_plane(grid_, b_); }

std::size_t RotationProfile::count(Region r) const {
  return std::size_t(std::count(regions_.begin(), regions_.end(), r));
}

}  // namespace rotasym
