#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "rotasym/field.hpp"

namespace rotasym {

// S: ∇b = 0 (below threshold), O: ∇b ≠ 0, band: S-threshold cells touching O.
enum class Region : std::uint8_t { singular, regular, band };

struct RadialParams {
  double b0 = 1.0;
  double amplitude = 0.0;
  double radius = 1.5;
  double center_x = std::numbers::pi;
  double center_y = std::numbers::pi;
  int n_bins = 16;
  double tol_grad = 1e-3;  // relative to max|∇_h b|
};

// One annulus of O with b in [b_lo, b_hi); gradient samples per member cell.
struct LevelBin {
  double b_lo = 0.0, b_hi = 0.0;
  std::vector<std::size_t> cells;  // plane indices
  std::vector<double> grad1, grad2;
};

// b(x_h) = b0 + A·χ(|x_h - c|/R), χ(s) = exp(1 - 1/(1 - s²)) on s < 1.
class RotationProfile {
 public:
  static RotationProfile radial(const Grid& g, const RadialParams& p);
  static RotationProfile constant(const Grid& g, double b0, int n_bins = 16);

  const Grid& grid() const { return grid_; }
  const RadialParams& params() const { return params_; }
  bool is_constant() const { return params_.amplitude == 0.0; }

  const PlaneField& b() const { return b_; }
  // b with Nyquist modes removed, and its exact spectral gradient.
  const PlaneField& b_smooth() const { return b_smooth_; }
  const PlaneField& grad_b(int c) const { return c == 0 ? grad1_ : grad2_; }
  // Gradient magnitude used for classification (analytic).
  const PlaneField& grad_magnitude() const { return grad_mag_; }
  ScalarField b_field() const;

  double b0() const { return params_.b0; }
  double b_min() const { return b_min_; }
  double b_max() const { return b_max_; }
  double tol_grad_abs() const { return tol_abs_; }

  const std::vector<Region>& regions() const { return regions_; }
  Region region(int i1, int i2) const { return regions_[std::size_t(i1) * grid_.nh() + i2]; }
  std::size_t count(Region r) const;
  const std::vector<LevelBin>& bins() const { return bins_; }

 private:
  explicit RotationProfile(const Grid& g) : grid_(g) {}

  Grid grid_;
  RadialParams params_;
  PlaneField b_, b_smooth_, grad1_, grad2_, grad_mag_;
  double b_min_ = 0.0, b_max_ = 0.0, tol_abs_ = 0.0;
  std::vector<Region> regions_;
  std::vector<LevelBin> bins_;
};

}  // namespace rotasym
