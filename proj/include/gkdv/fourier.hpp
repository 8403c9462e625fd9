#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gkdv {

using cplx = std::complex<double>;

/// Unnormalized forward DFT: X_q = sum_n x_n e^{-2 pi i q n / L}.
std::vector<cplx> fft(std::span<const cplx> x);
/// Inverse DFT including the 1/L factor.
std::vector<cplx> ifft(std::span<const cplx> X);

/// Fourier coefficients c_j of a 1-periodic function sampled at x_m = m/M,
/// indexed like the DFT (c_j at position j mod M).
std::vector<cplx> fourier_coefficients(std::span<const double> samples);

/// d^order/dx^order of a real 1-periodic function sampled on m/M; the
/// Nyquist mode is dropped for odd orders.
std::vector<double> spectral_derivative(std::span<const double> samples, int order);

/// Signed frequency of DFT bin q for length L (Nyquist counted positive).
inline long signed_bin(long q, long L) { return q <= L / 2 ? q : q - L; }

bool is_power_of_two(long n);

}  // namespace gkdv
