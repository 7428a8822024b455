#include "rotasym/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rotasym/errors.hpp"
#include "rotasym/spectral.hpp"

namespace rotasym {

Field3 random_divergence_free(const Grid& g, const RandomSpectrum& spec) {
  const int band = spec.band > 0 ? spec.band : g.nh() / 4;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  Field3 u(g, Representation::spectral);
  const int nh = g.nh(), n3 = g.n3();
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b)
      for (int c = -band; c <= band; ++c) {
        double z[6];
        for (double& v : z) v = normal(rng);
        const double km = std::sqrt(double(a * a + b * b + c * c));
        if (km == 0.0 || km > band) continue;
        if (2 * std::abs(a) >= nh || 2 * std::abs(b) >= nh || 2 * std::abs(c) >= n3) continue;
        std::size_t i = g.index((a + nh) % nh, (b + nh) % nh, (c + n3) % n3);
        const double amp = std::pow(km, spec.slope);
        for (int comp = 0; comp < 3; ++comp) u.spectral(comp)[i] = amp * Complex(z[2 * comp], z[2 * comp + 1]);
      }
  // real part of the synthesized field: û_k ← (û_k + conj(û_−k))/2
  for (int comp = 0; comp < 3; ++comp) {
    auto x = u.spectral(comp);
    const std::vector<Complex> y(x.begin(), x.end());
    for (int a = 0; a < nh; ++a)
      for (int b = 0; b < nh; ++b)
        for (int c = 0; c < n3; ++c)
          x[g.index(a, b, c)] =
              0.5 * (y[g.index(a, b, c)] + std::conj(y[g.index((nh - a) % nh, (nh - b) % nh, (n3 - c) % n3)]));
  }
  Field3 v = dealias(leray_project(u));
  const double rms = norm(v) / std::sqrt(g.volume());
  if (rms == 0.0) throw InvalidInput("random field is empty (band too small for the grid)");
  v *= 1.0 / rms;
  return v.to_physical();
}

Field3 taylor_green(const Grid& g, double amplitude) {
  Field3 u(g);
  auto u1 = u.physical(0), u2 = u.physical(1);
  for (int a = 0; a < g.nh(); ++a)
    for (int b = 0; b < g.nh(); ++b)
      for (int c = 0; c < g.n3(); ++c) {
        const double x = g.coord_h(a), y = g.coord_h(b);
        const std::size_t i = g.index(a, b, c);
        u1[i] = amplitude * std::cos(x) * std::sin(y);
        u2[i] = -amplitude * std::sin(x) * std::cos(y);
      }
  return u;
}

Field3 level_set_field(const RotationProfile& profile, const std::function<double(double)>& G) {
  const Grid& g = profile.grid();
  PlaneField phi(g.nh()), zero(g.nh());
  for (std::size_t q = 0; q < phi.size(); ++q) phi.v[q] = G(profile.b().v[q]);
  // ∇⊥φ = (∂2 φ, −∂1 φ)
  Field3 p = from_planes(g, zero, zero, phi);
  Field3 d1 = partial(p, 0), d2 = partial(p, 1);
  Field3 out(g);
  auto o1 = out.physical(0), o2 = out.physical(1);
  auto a = d2.physical(2), b = d1.physical(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    o1[i] = a[i];
    o2[i] = -b[i];
  }
  // Drop the Nyquist rows a one-sided derivative leaves behind.
  return leray_project(out).as_physical();
}

double bump_level_function(double b, double b0, double amplitude) {
  const double s = std::clamp((b - b0) / amplitude, 0.0, 1.0);
  // ∫_0^s t²(1−t)² dt, times A for d/db
  return amplitude * (s * s * s / 3.0 - s * s * s * s / 2.0 + s * s * s * s * s / 5.0);
}

}  // namespace rotasym
