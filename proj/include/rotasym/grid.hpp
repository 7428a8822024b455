#pragma once

#include <cstddef>
#include <numbers>

namespace rotasym {

// Periodic box [0,2π)^3 with n_h x n_h x n_3 points; x3 is the fastest index.
class Grid {
 public:
  Grid(int nh, int n3);

  int nh() const { return nh_; }
  int n3() const { return n3_; }
  std::size_t size() const { return std::size_t(nh_) * nh_ * n3_; }
  std::size_t plane_size() const { return std::size_t(nh_) * nh_; }
  std::size_t index(int i1, int i2, int i3) const {
    return (std::size_t(i1) * nh_ + i2) * n3_ + i3;
  }

  double dx() const { return 2 * std::numbers::pi / nh_; }
  double dz() const { return 2 * std::numbers::pi / n3_; }
  double coord_h(int i) const { return i * dx(); }
  double coord_3(int i) const { return i * dz(); }
  double volume() const { return 8 * std::numbers::pi * std::numbers::pi * std::numbers::pi; }
  double cell_volume() const { return volume() / double(size()); }
  double plane_area() const { return 4 * std::numbers::pi * std::numbers::pi; }

  // Signed wavenumber of FFT index i on an axis of n points; Nyquist maps to -n/2.
  static int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }
  static bool is_nyquist(int i, int n) { return i == n / 2; }
  // Wavenumber used for differentiation (zero at Nyquist).
  static double deriv_wavenumber(int i, int n) { return is_nyquist(i, n) ? 0.0 : double(wavenumber(i, n)); }

  bool operator==(const Grid& o) const { return nh_ == o.nh_ && n3_ == o.n3_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int nh_;
  int n3_;
};

}  // namespace rotasym
