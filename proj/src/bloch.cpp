#include "gkdv/bloch.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"

namespace gkdv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);

void check_xi(double xi) {
  if (!(xi >= -pi - 1e-12 && xi <= pi + 1e-12))
    throw Error(ErrorKind::argument, "Floquet exponent " + std::to_string(xi) + " outside [-pi, pi]");
}

void check_grid(std::size_t size, int P, int M) {
  if (!is_power_of_two(P) || !is_power_of_two(M))
    throw Error(ErrorKind::argument, "Bloch grids need powers of two, got P = " + std::to_string(P) +
                                         ", M = " + std::to_string(M));
  if (size != static_cast<std::size_t>(P) * static_cast<std::size_t>(M))
    throw Error(ErrorKind::argument, "sample count " + std::to_string(size) + " does not equal P * M");
}

// DFT bin q of length P*M -> (Floquet row, mode j).
struct BinIndex {
  int row;
  long j;
  double zeta;
};

BinIndex bin_index(long q, int P, int M) {
  const long L = static_cast<long>(P) * M;
  const long qs = signed_bin(q, L);
  long s = ((qs % P) + P) % P;
  if (s > P / 2) s -= P;
  return {static_cast<int>(s + P / 2 - 1), (qs - s) / P, 2.0 * pi * static_cast<double>(qs) / P};
}

}  // namespace

std::uint64_t profile_fingerprint(const WaveProfile& profile) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double v) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &v, sizeof v);
    for (unsigned char c : b) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (double v : profile.samples) mix(v);
  mix(profile.k);
  mix(profile.params.c);
  mix(profile.params.lambda);
  mix(profile.params.mu);
  return h;
}

cplx constant_state_symbol(double k, double zeta) {
  return -I * k * k * k * zeta * (4.0 * pi * pi - zeta * zeta);
}

HillOperator::HillOperator(const WaveProfile& profile, const Nonlinearity& f, int N)
    : N_(N), k_(profile.k), id_(profile_fingerprint(profile)) {
  if (N < 1) throw Error(ErrorKind::argument, "truncation N must be >= 1");
  const int M = profile.M();
  if (M < 4 * N)
    throw Error(ErrorKind::aliasing, "profile grid M = " + std::to_string(M) + " is below 4N = " +
                                         std::to_string(4 * N));
  std::vector<double> a(M);
  for (int m = 0; m < M; ++m) a[m] = f.eval(profile.samples[m], 1) - profile.params.c;
  const auto c = fourier_coefficients(a);
  coeff_.resize(4 * N + 1);
  for (int j = -2 * N; j <= 2 * N; ++j) coeff_[j + 2 * N] = c[((j % M) + M) % M];
}

BlochSymbol HillOperator::at(double xi) const {
  check_xi(xi);
  const int n = 2 * N_ + 1;
  BlochSymbol s;
  s.xi = xi;
  s.N = N_;
  s.k = k_;
  s.profile_id = id_;
  s.matrix.resize(n, n);
  for (int r = 0; r < n; ++r) {
    const double zr = 2.0 * pi * (r - N_) + xi;
    for (int col = 0; col < n; ++col) {
      cplx inner = coeff_[r - col + 2 * N_];
      if (r == col) inner -= k_ * k_ * zr * zr;
      s.matrix(r, col) = -k_ * I * zr * inner;
    }
  }
  return s;
}

CMatrix HillOperator::dxi(double xi) const {
  check_xi(xi);
  const int n = 2 * N_ + 1;
  CMatrix d(n, n);
  for (int r = 0; r < n; ++r) {
    const double zr = 2.0 * pi * (r - N_) + xi;
    for (int col = 0; col < n; ++col) {
      cplx inner = coeff_[r - col + 2 * N_];
      cplx dinner = 0.0;
      if (r == col) {
        inner -= k_ * k_ * zr * zr;
        dinner = -2.0 * k_ * k_ * zr;
      }
      d(r, col) = -k_ * I * (inner + zr * dinner);
    }
  }
  return d;
}

BlochSymbol assemble_symbol(const WaveProfile& profile, const Nonlinearity& f, double xi, int N) {
  return HillOperator(profile, f, N).at(xi);
}

CMatrix mode_shift(int N) {
  const int n = 2 * N + 1;
  CMatrix S = CMatrix::Zero(n, n);
  for (int c = 0; c + 1 < n; ++c) S(c + 1, c) = 1.0;
  return S;
}

BlochField bloch_transform(const std::vector<cplx>& g, int P, int M) {
  check_grid(g.size(), P, M);
  const long L = static_cast<long>(P) * M;
  const double x0 = -0.5 * P;
  const auto G = fft(g);

  BlochField out;
  out.P = P;
  out.M = M;
  out.xi.resize(P);
  for (int i = 0; i < P; ++i) out.xi[i] = 2.0 * pi * (i - P / 2 + 1) / P;
  out.coeffs = CMatrix::Zero(P, M);
  for (long q = 0; q < L; ++q) {
    const BinIndex b = bin_index(q, P, M);
    out.coeffs(b.row, ((b.j % M) + M) % M) = G[q] * std::exp(-I * b.zeta * x0) / (2.0 * pi * M);
  }
  out.values.resize(P, M);
  std::vector<cplx> row(M);
  for (int i = 0; i < P; ++i) {
    for (int q = 0; q < M; ++q) row[q] = out.coeffs(i, q);
    const auto v = ifft(row);
    for (int m = 0; m < M; ++m) out.values(i, m) = v[m] * static_cast<double>(M);
  }
  return out;
}

BlochField bloch_transform(const std::vector<double>& g, int P, int M) {
  return bloch_transform(std::vector<cplx>(g.begin(), g.end()), P, M);
}

std::vector<cplx> inverse_bloch_from_coeffs(const CMatrix& coeffs, int P, int M) {
  check_grid(static_cast<std::size_t>(coeffs.rows() * coeffs.cols()), P, M);
  const long L = static_cast<long>(P) * M;
  const double x0 = -0.5 * P;
  std::vector<cplx> G(L);
  for (long q = 0; q < L; ++q) {
    const BinIndex b = bin_index(q, P, M);
    G[q] = coeffs(b.row, ((b.j % M) + M) % M) * std::exp(I * b.zeta * x0) * (2.0 * pi * M);
  }
  return ifft(G);
}

std::vector<cplx> inverse_bloch_transform(const BlochField& field) {
  CMatrix coeffs(field.P, field.M);
  std::vector<cplx> row(field.M);
  for (int i = 0; i < field.P; ++i) {
    for (int m = 0; m < field.M; ++m) row[m] = field.values(i, m);
    const auto c = fft(row);
    for (int q = 0; q < field.M; ++q) coeffs(i, q) = c[q] / static_cast<double>(field.M);
  }
  return inverse_bloch_from_coeffs(coeffs, field.P, field.M);
}

double l2_norm_squared(const std::vector<cplx>& g, int M) {
  double s = 0.0;
  for (const auto& z : g) s += std::norm(z);
  return s / M;
}

double bloch_norm_squared(const BlochField& field) {
  return 2.0 * pi * (2.0 * pi / field.P) * field.values.squaredNorm() / field.M;
}

double translate_property_check(const std::vector<cplx>& g, int P, int M) {
  check_grid(g.size(), P, M);
  std::vector<cplx> shifted(g.size());
  const std::size_t L = g.size();
  for (std::size_t n = 0; n < L; ++n) shifted[(n + M) % L] = g[n];
  const auto a = bloch_transform(g, P, M);
  const auto b = bloch_transform(shifted, P, M);
  double worst = 0.0;
  for (int i = 0; i < P; ++i)
    for (int m = 0; m < M; ++m)
      worst = std::max(worst, std::abs(b.values(i, m) - std::exp(-I * a.xi[i]) * a.values(i, m)));
  return worst;
}

}  // namespace gkdv
