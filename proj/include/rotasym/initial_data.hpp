#pragma once

#include <cstdint>
#include <functional>

#include "rotasym/field.hpp"
#include "rotasym/profile.hpp"

namespace rotasym {

struct RandomSpectrum {
  std::uint64_t seed = 1;
  double slope = -2.0;  // per-mode amplitude ~ |k|^slope (shell spectrum ~ |k|^(2 slope + 2))
  int band = 0;         // keep |k| <= band; 0 means n_h/4
};

// Random divergence-free field, dealiased, unit RMS. Coefficients are drawn per
// wavevector in a fixed loop order, so equal seeds and bands give the same
// continuum field on every grid.
Field3 random_divergence_free(const Grid& g, const RandomSpectrum& spec);

// (cos x1 sin x2, -sin x1 cos x2, 0) scaled by amplitude.
Field3 taylor_green(const Grid& g, double amplitude = 1.0);

// Azimuthal field ∇_h^⊥ G(b) (x3-independent, zero vertical component): a
// kernel element supported where G'(b) ≠ 0.
Field3 level_set_field(const RotationProfile& profile, const std::function<double(double)>& G);

// G with G' = s²(1−s)², s = (b − b0)/A, G(b0) = 0: vanishes to third order at
// the edge of the bump, so ∇_h^⊥G(b) lives in O.
double bump_level_function(double b, double b0, double amplitude);

}  // namespace rotasym
