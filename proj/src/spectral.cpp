#include "rotasym/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <vector>

#include "rotasym/errors.hpp"

namespace rotasym {
namespace {

struct Axes {
  std::vector<double> kd1, kd3;  // derivative wavenumbers
  std::vector<int> kr1, kr3;     // raw signed wavenumbers
  std::vector<bool> ny1, ny3;
  explicit Axes(const Grid& g) {
    for (int i = 0; i < g.nh(); ++i) {
      kd1.push_back(Grid::deriv_wavenumber(i, g.nh()));
      kr1.push_back(Grid::wavenumber(i, g.nh()));
      ny1.push_back(Grid::is_nyquist(i, g.nh()));
    }
    for (int i = 0; i < g.n3(); ++i) {
      kd3.push_back(Grid::deriv_wavenumber(i, g.n3()));
      kr3.push_back(Grid::wavenumber(i, g.n3()));
      ny3.push_back(Grid::is_nyquist(i, g.n3()));
    }
  }
};

// Calls f(index, i1, i2, i3) over the full cube in storage order.
template <class F>
void for_modes(const Grid& g, F&& f) {
  std::size_t idx = 0;
  for (int a = 0; a < g.nh(); ++a)
    for (int b = 0; b < g.nh(); ++b)
      for (int c = 0; c < g.n3(); ++c) f(idx++, a, b, c);
}

const Complex I(0.0, 1.0);

template <int N>
Field<N> spectral_copy(const Field<N>& u) {
  return u.is_spectral() ? u : u.as_spectral();
}

template <int M, int N>
Field<M> finish(Field<M> out, const Field<N>& like) {
  if (like.is_physical()) out.to_physical();
  return out;
}

}  // namespace

Field3 gradient(const ScalarField& f, bool horizontal) {
  const Grid& g = f.grid();
  ScalarField s = spectral_copy(f);
  Axes ax(g);
  Field3 out(g, Representation::spectral);
  auto x = s.spectral(0);
  auto o1 = out.spectral(0), o2 = out.spectral(1), o3 = out.spectral(2);
  for_modes(g, [&](std::size_t i, int a, int b, int c) {
    o1[i] = I * ax.kd1[a] * x[i];
    o2[i] = I * ax.kd1[b] * x[i];
    o3[i] = horizontal ? Complex(0.0) : I * ax.kd3[c] * x[i];
  });
  return finish(std::move(out), f);
}

ScalarField laplacian(const ScalarField& f, bool horizontal) {
  const Grid& g = f.grid();
  ScalarField s = spectral_copy(f);
  Axes ax(g);
  auto x = s.spectral(0);
  for_modes(g, [&](std::size_t i, int a, int b, int c) {
    double k2 = ax.kd1[a] * ax.kd1[a] + ax.kd1[b] * ax.kd1[b] + (horizontal ? 0.0 : ax.kd3[c] * ax.kd3[c]);
    x[i] *= -k2;
  });
  return finish(std::move(s), f);
}

ScalarField divergence(const Field3& u) {
  const Grid& g = u.grid();
  Field3 s = spectral_copy(u);
  Axes ax(g);
  ScalarField out(g, Representation::spectral);
  auto o = out.spectral(0);
  auto x1 = s.spectral(0), x2 = s.spectral(1), x3 = s.spectral(2);
  for_modes(g, [&](std::size_t i, int a, int b, int c) {
    o[i] = I * (ax.kd1[a] * x1[i] + ax.kd1[b] * x2[i] + ax.kd3[c] * x3[i]);
  });
  return finish(std::move(out), u);
}

Field3 curl(const Field3& u) {
  const Grid& g = u.grid();
  Field3 s = spectral_copy(u);
  Axes ax(g);
  Field3 out(g, Representation::spectral);
  auto x1 = s.spectral(0), x2 = s.spectral(1), x3 = s.spectral(2);
  auto o1 = out.spectral(0), o2 = out.spectral(1), o3 = out.spectral(2);
  for_modes(g, [&](std::size_t i, int a, int b, int c) {
    double k1 = ax.kd1[a], k2 = ax.kd1[b], k3 = ax.kd3[c];
    o1[i] = I * (k2 * x3[i] - k3 * x2[i]);
    o2[i] = I * (k3 * x1[i] - k1 * x3[i]);
    o3[i] = I * (k1 * x2[i] - k2 * x1[i]);
  });
  return finish(std::move(out), u);
}

Field3 laplacian(const Field3& u, bool horizontal) {
  const Grid& g = u.grid();
  Field3 s = spectral_copy(u);
  Axes ax(g);
  for (int comp = 0; comp < 3; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      double k2 = ax.kd1[a] * ax.kd1[a] + ax.kd1[b] * ax.kd1[b] + (horizontal ? 0.0 : ax.kd3[c] * ax.kd3[c]);
      x[i] *= -k2;
    });
  }
  return finish(std::move(s), u);
}

template <int N>
static Field<N> partial_impl(const Field<N>& u, int axis) {
  if (axis < 0 || axis > 2) throw InvalidInput("partial: axis must be 0, 1 or 2");
  const Grid& g = u.grid();
  Field<N> s = spectral_copy(u);
  Axes ax(g);
  for (int comp = 0; comp < N; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      double k = axis == 0 ? ax.kd1[a] : axis == 1 ? ax.kd1[b] : ax.kd3[c];
      x[i] *= I * k;
    });
  }
  return finish(std::move(s), u);
}

Field3 partial(const Field3& u, int axis) { return partial_impl(u, axis); }
ScalarField partial(const ScalarField& f, int axis) { return partial_impl(f, axis); }

Field3 spectral_derivative(const ScalarField& f, DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::grad: return gradient(f, false);
    case DerivativeKind::horizontal_grad: return gradient(f, true);
    default: throw InvalidInput("derivative kind does not map a scalar to a vector field");
  }
}

ScalarField spectral_derivative_scalar(const ScalarField& f, DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::laplacian: return laplacian(f, false);
    case DerivativeKind::horizontal_laplacian: return laplacian(f, true);
    default: throw InvalidInput("derivative kind does not map a scalar to a scalar field");
  }
}

Field3 spectral_derivative(const Field3& u, DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::curl: return curl(u);
    case DerivativeKind::laplacian: return laplacian(u, false);
    case DerivativeKind::horizontal_laplacian: return laplacian(u, true);
    default: throw InvalidInput("derivative kind does not map a vector field to a vector field");
  }
}

ScalarField spectral_derivative_scalar(const Field3& u, DerivativeKind kind) {
  if (kind != DerivativeKind::div) throw InvalidInput("only div maps a vector field to a scalar field");
  return divergence(u);
}

Field3 leray_project(const Field3& u) {
  const Grid& g = u.grid();
  Field3 s = spectral_copy(u);
  Axes ax(g);
  auto x1 = s.spectral(0), x2 = s.spectral(1), x3 = s.spectral(2);
  const int nh = g.nh(), n3 = g.n3();
  std::size_t i = 0;
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b) {
      if (ax.ny1[a] || ax.ny1[b]) {
        for (int c = 0; c < n3; ++c, ++i) x1[i] = x2[i] = x3[i] = 0.0;
        continue;
      }
      const double k1 = ax.kd1[a], k2 = ax.kd1[b], kh = k1 * k1 + k2 * k2;
      for (int c = 0; c < n3; ++c, ++i) {
        if (ax.ny3[c]) {
          x1[i] = x2[i] = x3[i] = 0.0;
          continue;
        }
        const double k3 = ax.kd3[c], kk = kh + k3 * k3;
        if (kk == 0.0) continue;
        const Complex d = (k1 * x1[i] + k2 * x2[i] + k3 * x3[i]) / kk;
        x1[i] -= k1 * d;
        x2[i] -= k2 * d;
        x3[i] -= k3 * d;
      }
    }
  return finish(std::move(s), u);
}

template <int N>
Field<N> truncate_Jn(const Field<N>& u, int n) {
  if (n < 0) throw InvalidInput("truncate_Jn: n must be >= 0");
  const Grid& g = u.grid();
  Field<N> s = spectral_copy(u);
  Axes ax(g);
  for (int comp = 0; comp < N; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      if (std::abs(ax.kr1[a]) > n || std::abs(ax.kr1[b]) > n || std::abs(ax.kr3[c]) > n) x[i] = 0.0;
    });
  }
  return finish(std::move(s), u);
}

template <int N>
Field<N> dealias(const Field<N>& u) {
  const Grid& g = u.grid();
  Field<N> s = spectral_copy(u);
  Axes ax(g);
  const int ch = g.nh() / 3, c3 = g.n3() / 3;
  for (int comp = 0; comp < N; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      if (std::abs(ax.kr1[a]) > ch || std::abs(ax.kr1[b]) > ch || std::abs(ax.kr3[c]) > c3) x[i] = 0.0;
    });
  }
  return finish(std::move(s), u);
}

namespace {

double bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

double radial_integral(double xi) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [xi](double r) {
    double x = xi * r;
    double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return bump(r) * r * r * sinc;
  };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 10, 1e-13);
}

}  // namespace

double bump_transform(double xi) {
  static const double mass = radial_integral(0.0);
  return radial_integral(xi) / mass;
}

template <int N>
Field<N> mollify(const Field<N>& u, double delta) {
  if (!(delta > 0.0 && delta < std::numbers::pi)) throw InvalidInput("mollify: delta must lie in (0, pi)");
  const Grid& g = u.grid();
  Field<N> s = spectral_copy(u);
  Axes ax(g);
  std::map<long, double> cache;
  std::vector<double> mult(g.size());
  for_modes(g, [&](std::size_t i, int a, int b, int c) {
    long k2 = long(ax.kr1[a]) * ax.kr1[a] + long(ax.kr1[b]) * ax.kr1[b] + long(ax.kr3[c]) * ax.kr3[c];
    auto it = cache.find(k2);
    if (it == cache.end()) it = cache.emplace(k2, bump_transform(delta * std::sqrt(double(k2)))).first;
    mult[i] = it->second;
  });
  for (int comp = 0; comp < N; ++comp) {
    auto x = s.spectral(comp);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mult[i];
  }
  return finish(std::move(s), u);
}

template Field<1> truncate_Jn(const Field<1>&, int);
template Field<3> truncate_Jn(const Field<3>&, int);
template Field<1> dealias(const Field<1>&);
template Field<3> dealias(const Field<3>&);
template Field<1> mollify(const Field<1>&, double);
template Field<3> mollify(const Field<3>&, double);

Field3 cross(const Field3& a, const Field3& b) {
  if (a.grid() != b.grid()) throw InvalidInput("cross: field grids differ");
  const Field3& pa = a.is_physical() ? a : a.as_physical();
  Field3 tmp(b.grid());
  const Field3& pb = b.is_physical() ? b : (tmp = b.as_physical());
  Field3 out(a.grid());
  auto a1 = pa.physical(0), a2 = pa.physical(1), a3 = pa.physical(2);
  auto b1 = pb.physical(0), b2 = pb.physical(1), b3 = pb.physical(2);
  auto o1 = out.physical(0), o2 = out.physical(1), o3 = out.physical(2);
  for (std::size_t i = 0; i < o1.size(); ++i) {
    o1[i] = a2[i] * b3[i] - a3[i] * b2[i];
    o2[i] = a3[i] * b1[i] - a1[i] * b3[i];
    o3[i] = a1[i] * b2[i] - a2[i] * b1[i];
  }
  return out;
}

ScalarField dot(const Field3& a, const Field3& b) {
  if (a.grid() != b.grid()) throw InvalidInput("dot: field grids differ");
  const Field3& pa = a.is_physical() ? a : a.as_physical();
  Field3 tmp(b.grid());
  const Field3& pb = b.is_physical() ? b : (tmp = b.as_physical());
  ScalarField out(a.grid());
  auto o = out.physical(0);
  for (int c = 0; c < 3; ++c) {
    auto x = pa.physical(c), y = pb.physical(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += x[i] * y[i];
  }
  return out;
}

double gradient_norm_sq(const Field3& u) {
  const Grid& g = u.grid();
  Field3 s = spectral_copy(u);
  Axes ax(g);
  double sum = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      double k2 = ax.kd1[a] * ax.kd1[a] + ax.kd1[b] * ax.kd1[b] + ax.kd3[c] * ax.kd3[c];
      sum += k2 * std::norm(x[i]);
    });
  }
  return sum * g.volume();
}

template <int N>
double hermitian_defect(const Field<N>& u) {
  const Grid& g = u.grid();
  Field<N> s = spectral_copy(u);
  double worst = 0.0, scale = 0.0;
  const int nh = g.nh(), n3 = g.n3();
  for (int comp = 0; comp < N; ++comp) {
    auto x = s.spectral(comp);
    for_modes(g, [&](std::size_t i, int a, int b, int c) {
      std::size_t j = g.index((nh - a) % nh, (nh - b) % nh, (n3 - c) % n3);
      worst = std::max(worst, std::abs(x[i] - std::conj(x[j])));
      scale = std::max(scale, std::abs(x[i]));
    });
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

template double hermitian_defect(const Field<1>&);
template double hermitian_defect(const Field<3>&);

}  // namespace rotasym
