#pragma once

#include <cstdint>
#include <vector>

#include "gkdv/linalg.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/profile.hpp"

namespace gkdv {

/// Galerkin matrix of L_xi = -k (d_x + i xi)((k^2 (d_x + i xi)^2 + f'(v) - c) .)
/// in the basis e_n = exp(2 pi i n x), n = -N..N (row/column n + N).
struct BlochSymbol {
  double xi = 0.0;
  int N = 0;
  double k = 0.0;
  std::uint64_t profile_id = 0;
  CMatrix matrix;
};

/// Precomputes the Fourier coefficients of f'(v) - c once so symbols at many
/// Floquet exponents are cheap. Immutable after construction.
class HillOperator {
 public:
  HillOperator(const WaveProfile& profile, const Nonlinearity& f, int N);

  BlochSymbol at(double xi) const;
  /// d/dxi of the symbol, exact.
  CMatrix dxi(double xi) const;

  int N() const { return N_; }
  double k() const { return k_; }
  std::uint64_t profile_id() const { return id_; }
  /// Coefficient j (|j| <= 2N) of f'(v) - c.
  cplx coefficient(int j) const { return coeff_[j + 2 * N_]; }

 private:
  int N_;
  double k_;
  std::uint64_t id_;
  std::vector<cplx> coeff_;
};

BlochSymbol assemble_symbol(const WaveProfile& profile, const Nonlinearity& f, double xi, int N);

/// FNV-1a over the profile samples and wavenumber.
std::uint64_t profile_fingerprint(const WaveProfile& profile);

/// Dispersion relation of the constant state: Lambda(z) = -i k^3 z (4 pi^2 - z^2).
cplx constant_state_symbol(double k, double zeta);

/// The (2N+1)x(2N+1) shift e_n -> e_{n+1}, truncated.
CMatrix mode_shift(int N);

/// Bloch data of a function sampled on P unit cells with M points per cell
/// starting at x = -P/2. Row i holds the Floquet exponent xi[i] = 2 pi s / P,
/// s = i - P/2 + 1, so the exponents increase through (-pi, pi].
struct BlochField {
  int P = 0;
  int M = 0;
  std::vector<double> xi;
  /// values(i, m) = g-check(xi_i, m / M).
  CMatrix values;
  /// coeffs(i, q) = g-hat(xi_i + 2 pi j) with j the signed bin of q mod M.
  CMatrix coeffs;
};

BlochField bloch_transform(const std::vector<cplx>& g, int P, int M);
BlochField bloch_transform(const std::vector<double>& g, int P, int M);
/// Resynthesis g(x) = int e^{i xi x} g-check(xi, x) d xi (rectangle rule in xi).
std::vector<cplx> inverse_bloch_transform(const BlochField& field);
/// Same, starting from the mode coefficients (values are ignored).
std::vector<cplx> inverse_bloch_from_coeffs(const CMatrix& coeffs, int P, int M);

/// ||g||^2 on the line and 2 pi ||g-check||^2 on (-pi, pi) x (0, 1).
double l2_norm_squared(const std::vector<cplx>& g, int M);
double bloch_norm_squared(const BlochField& field);

/// max |check[g(. - 1)] - e^{-i xi} check[g]| using an in-grid one-cell shift.
double translate_property_check(const std::vector<cplx>& g, int P, int M);

}  // namespace gkdv
