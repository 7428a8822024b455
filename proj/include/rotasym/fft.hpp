#pragma once

#include <complex>
#include <span>

namespace rotasym {

using Complex = std::complex<double>;

// Normalized real transforms with a full-cube spectrum (conjugate-symmetric): forward divides by the point count,
// so spectral coefficients are Fourier-series amplitudes.
namespace fft {

void forward3(int n1, int n2, int n3, std::span<const double> in, std::span<Complex> out);
void backward3(int n1, int n2, int n3, std::span<const Complex> in, std::span<double> out);
void forward2(int n, std::span<const double> in, std::span<Complex> out);
void backward2(int n, std::span<const Complex> in, std::span<double> out);

// Thread count used for plans created from now on. Defaults to ROTASYM_THREADS or 1.
void set_threads(int n);
int threads();

}  // namespace fft
}  // namespace rotasym
