#include "rotasym/field.hpp"

#include <cmath>

#include "rotasym/errors.hpp"

namespace rotasym {

template <int N>
Field<N>::Field(const Grid& grid, Representation rep) : grid_(grid), rep_(rep) {
  for (int c = 0; c < N; ++c) {
    if (rep_ == Representation::physical)
      phys_[c].assign(grid_.size(), 0.0);
    else
      spec_[c].assign(grid_.size(), Complex(0.0, 0.0));
  }
}

template <int N>
std::span<double> Field<N>::physical(int c) {
  if (rep_ != Representation::physical) throw InvalidInput("field is not in physical representation");
  return phys_[c];
}

template <int N>
std::span<const double> Field<N>::physical(int c) const {
  if (rep_ != Representation::physical) throw InvalidInput("field is not in physical representation");
  return phys_[c];
}

template <int N>
std::span<Complex> Field<N>::spectral(int c) {
  if (rep_ != Representation::spectral) throw InvalidInput("field is not in spectral representation");
  return spec_[c];
}

template <int N>
std::span<const Complex> Field<N>::spectral(int c) const {
  if (rep_ != Representation::spectral) throw InvalidInput("field is not in spectral representation");
  return spec_[c];
}

template <int N>
Field<N>& Field<N>::to_spectral() {
  if (rep_ == Representation::spectral) return *this;
  for (int c = 0; c < N; ++c) {
    spec_[c].resize(grid_.size());
    fft::forward3(grid_.nh(), grid_.nh(), grid_.n3(), phys_[c], spec_[c]);
    std::vector<double>().swap(phys_[c]);
  }
  rep_ = Representation::spectral;
  return *this;
}

template <int N>
Field<N>& Field<N>::to_physical() {
  if (rep_ == Representation::physical) return *this;
  for (int c = 0; c < N; ++c) {
    phys_[c].resize(grid_.size());
    fft::backward3(grid_.nh(), grid_.nh(), grid_.n3(), spec_[c], phys_[c]);
    std::vector<Complex>().swap(spec_[c]);
  }
  rep_ = Representation::physical;
  return *this;
}

template <int N>
void Field<N>::set_zero() {
  for (int c = 0; c < N; ++c) {
    if (is_physical())
      std::fill(phys_[c].begin(), phys_[c].end(), 0.0);
    else
      std::fill(spec_[c].begin(), spec_[c].end(), Complex(0.0, 0.0));
  }
}

template <int N>
Field<N>& Field<N>::axpy(double a, const Field& x) {
  if (x.grid_ != grid_) throw InvalidInput("field grids differ");
  if (x.rep_ != rep_) {
    Field y = x;
    y.to(rep_);
    return axpy(a, y);
  }
  for (int c = 0; c < N; ++c) {
    if (is_physical()) {
      auto& d = phys_[c];
      const auto& s = x.phys_[c];
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += a * s[i];
    } else {
      auto& d = spec_[c];
      const auto& s = x.spec_[c];
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += a * s[i];
    }
  }
  return *this;
}

template <int N>
Field<N>& Field<N>::operator*=(double s) {
  for (int c = 0; c < N; ++c) {
    if (is_physical())
      for (auto& v : phys_[c]) v *= s;
    else
      for (auto& v : spec_[c]) v *= s;
  }
  return *this;
}

template <int N>
double Field<N>::max_abs() const {
  const Field& p = is_physical() ? *this : as_physical();
  double m = 0.0;
  for (int c = 0; c < N; ++c)
    for (double v : p.phys_[c]) m = std::max(m, std::abs(v));
  return m;
}

template <int N>
bool Field<N>::all_finite() const {
  for (int c = 0; c < N; ++c) {
    if (is_physical()) {
      for (double v : phys_[c])
        if (!std::isfinite(v)) return false;
    } else {
      for (const Complex& v : spec_[c])
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

template class Field<1>;
template class Field<3>;

template <int N>
double inner(const Field<N>& a, const Field<N>& b) {
  if (a.grid() != b.grid()) throw InvalidInput("inner: field grids differ");
  const Grid& g = a.grid();
  double s = 0.0;
  if (a.is_spectral() && b.is_spectral()) {
    for (int c = 0; c < N; ++c) {
      auto x = a.spectral(c);
      auto y = b.spectral(c);
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    }
    return s * g.volume();
  }
  if (!a.is_physical()) return inner(a.as_physical(), b);
  if (!b.is_physical()) return inner(a, b.as_physical());
  for (int c = 0; c < N; ++c) {
    auto x = a.physical(c);
    auto y = b.physical(c);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  }
  return s * g.cell_volume();
}

template <int N>
double norm(const Field<N>& a) {
  return std::sqrt(std::max(0.0, inner(a, a)));
}

template double inner(const Field<1>&, const Field<1>&);
template double inner(const Field<3>&, const Field<3>&);
template double norm(const Field<1>&);
template double norm(const Field<3>&);

double inner(const PlaneField& a, const PlaneField& b) {
  if (a.nh != b.nh) throw InvalidInput("inner: plane sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  double h = 2 * std::numbers::pi / a.nh;
  return s * h * h;
}

double norm(const PlaneField& a) { return std::sqrt(inner(a, a)); }

PlaneField vertical_mean_plane(const Field3& u, int component) {
  const Field3& p = u.is_physical() ? u : u.as_physical();
  const Grid& g = u.grid();
  PlaneField out(g.nh());
  auto x = p.physical(component);
  const int n3 = g.n3();
  for (std::size_t q = 0; q < g.plane_size(); ++q) {
    double s = 0.0;
    for (int k = 0; k < n3; ++k) s += x[q * n3 + k];
    out.v[q] = s / n3;
  }
  return out;
}

Field3 from_planes(const Grid& g, const PlaneField& u1, const PlaneField& u2, const PlaneField& u3) {
  Field3 out(g);
  const PlaneField* src[3] = {&u1, &u2, &u3};
  for (int c = 0; c < 3; ++c) {
    if (src[c]->nh != g.nh()) throw InvalidInput("from_planes: plane size does not match grid");
    auto x = out.physical(c);
    for (std::size_t q = 0; q < g.plane_size(); ++q)
      for (int k = 0; k < g.n3(); ++k) x[q * g.n3() + k] = src[c]->v[q];
  }
  return out;
}

ScalarField from_plane(const Grid& g, const PlaneField& p) {
  if (p.nh != g.nh()) throw InvalidInput("from_plane: plane size does not match grid");
  ScalarField out(g);
  auto x = out.physical(0);
  for (std::size_t q = 0; q < g.plane_size(); ++q)
    for (int k = 0; k < g.n3(); ++k) x[q * g.n3() + k] = p.v[q];
  return out;
}

Field3 vertical_mean(const Field3& u) {
  const Grid& g = u.grid();
  if (u.is_spectral()) {
    Field3 out = u;
    for (int c = 0; c < 3; ++c) {
      auto x = out.spectral(c);
      for (std::size_t i = 0; i < x.size(); ++i)
        if (i % g.n3() != 0) x[i] = 0.0;
    }
    return out;
  }
  return from_planes(g, vertical_mean_plane(u, 0), vertical_mean_plane(u, 1), vertical_mean_plane(u, 2));
}

}  // namespace rotasym
