#pragma once

#include <array>
#include <span>
#include <vector>

#include "rotasym/fft.hpp"
#include "rotasym/grid.hpp"

namespace rotasym {

enum class Representation { physical, spectral };

// N-component field on the periodic box, held either as real samples or as
// the full complex cube of Fourier coefficients.
template <int N>
class Field {
 public:
  explicit Field(const Grid& grid, Representation rep = Representation::physical);

  const Grid& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }
  bool is_spectral() const { return rep_ == Representation::spectral; }
  static constexpr int components = N;

  std::span<double> physical(int c);
  std::span<const double> physical(int c) const;
  std::span<Complex> spectral(int c);
  std::span<const Complex> spectral(int c) const;

  Field& to_spectral();
  Field& to_physical();
  Field& to(Representation rep) { return rep == Representation::spectral ? to_spectral() : to_physical(); }
  Field as_spectral() const { Field f = *this; f.to_spectral(); return f; }
  Field as_physical() const { Field f = *this; f.to_physical(); return f; }

  void set_zero();
  // a*x + this, in the representation of *this.
  Field& axpy(double a, const Field& x);
  Field& operator+=(const Field& o) { return axpy(1.0, o); }
  Field& operator-=(const Field& o) { return axpy(-1.0, o); }
  Field& operator*=(double s);

  // Largest absolute physical sample over all components.
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  Representation rep_;
  std::array<std::vector<double>, N> phys_;
  std::array<std::vector<Complex>, N> spec_;
};

template <int N>
Field<N> operator+(Field<N> a, const Field<N>& b) { return a += b; }
template <int N>
Field<N> operator-(Field<N> a, const Field<N>& b) { return a -= b; }
template <int N>
Field<N> operator*(double s, Field<N> a) { return a *= s; }

using ScalarField = Field<1>;
using Field3 = Field<3>;

extern template class Field<1>;
extern template class Field<3>;

// Real function of x_h on the n_h x n_h plane (i1 slow, i2 fast).
struct PlaneField {
  int nh = 0;
  std::vector<double> v;

  PlaneField() = default;
  explicit PlaneField(int n, double value = 0.0) : nh(n), v(std::size_t(n) * n, value) {}
  double& operator()(int i1, int i2) { return v[std::size_t(i1) * nh + i2]; }
  double operator()(int i1, int i2) const { return v[std::size_t(i1) * nh + i2]; }
  std::size_t size() const { return v.size(); }
};

// L² inner product / norm on the box (physical quadrature = Parseval sum).
template <int N>
double inner(const Field<N>& a, const Field<N>& b);
template <int N>
double norm(const Field<N>& a) ;
double inner(const PlaneField& a, const PlaneField& b);
double norm(const PlaneField& a);

// Vertical mean of each component (x3-independent field, same grid).
Field3 vertical_mean(const Field3& u);
PlaneField vertical_mean_plane(const Field3& u, int component);
// Broadcast plane components along x3.
Field3 from_planes(const Grid& g, const PlaneField& u1, const PlaneField& u2, const PlaneField& u3);
ScalarField from_plane(const Grid& g, const PlaneField& p);

}  // namespace rotasym
