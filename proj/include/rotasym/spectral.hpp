#pragma once

#include "rotasym/field.hpp"

namespace rotasym {

enum class DerivativeKind { grad, div, curl, laplacian, horizontal_grad, horizontal_laplacian };

// Exact Fourier differentiation; the result keeps the input representation.
// Valid kinds: scalar -> grad, horizontal_grad (Field3); laplacian,
// horizontal_laplacian (scalar). Field3 -> div (scalar); curl, laplacian,
// horizontal_laplacian (Field3). Anything else throws InvalidInput.
Field3 gradient(const ScalarField& f, bool horizontal = false);
ScalarField laplacian(const ScalarField& f, bool horizontal = false);
ScalarField divergence(const Field3& u);
Field3 curl(const Field3& u);
Field3 laplacian(const Field3& u, bool horizontal = false);
Field3 partial(const Field3& u, int axis);
ScalarField partial(const ScalarField& f, int axis);

Field3 spectral_derivative(const ScalarField& f, DerivativeKind kind);       // grad kinds
ScalarField spectral_derivative_scalar(const ScalarField& f, DerivativeKind kind);
Field3 spectral_derivative(const Field3& u, DerivativeKind kind);           // curl, laplacians
ScalarField spectral_derivative_scalar(const Field3& u, DerivativeKind kind);  // div

// Leray projection; modes with a Nyquist index are removed, the zero mode kept.
Field3 leray_project(const Field3& u);
// Zero every mode with max|k_i| > n.
template <int N>
Field<N> truncate_Jn(const Field<N>& u, int n);
// Convolution with the unit-mass bump at scale delta, 0 < delta < π.
template <int N>
Field<N> mollify(const Field<N>& u, double delta);
// Two-thirds rule: zero modes with any |k_i| > floor(n_i/3).
template <int N>
Field<N> dealias(const Field<N>& u);

// Fourier transform of the normalized bump kernel at |ξ| (for tests).
double bump_transform(double xi);

// Pointwise products, returned physical.
Field3 cross(const Field3& a, const Field3& b);
ScalarField dot(const Field3& a, const Field3& b);

// Sum of squared gradient norms, ‖∇u‖² over all components.
double gradient_norm_sq(const Field3& u);
// Relative size of the largest Hermitian-symmetry violation of a spectral field.
template <int N>
double hermitian_defect(const Field<N>& u);

}  // namespace rotasym
