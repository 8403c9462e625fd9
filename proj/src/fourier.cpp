#include "gkdv/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numbers>

#include "gkdv/error.hpp"

namespace gkdv {

namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex planner_mutex;

std::vector<cplx> transform(std::span<const cplx> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.begin(), in.end());
  if (n == 0) return out;
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<cplx> fft(std::span<const cplx> x) { return transform(x, FFTW_FORWARD); }

std::vector<cplx> ifft(std::span<const cplx> X) {
  auto out = transform(X, FFTW_BACKWARD);
  const double s = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& z : out) z *= s;
  return out;
}

std::vector<cplx> fourier_coefficients(std::span<const double> samples) {
  std::vector<cplx> x(samples.begin(), samples.end());
  auto c = fft(x);
  const double s = 1.0 / static_cast<double>(samples.size());
  for (auto& z : c) z *= s;
  return c;
}

std::vector<double> spectral_derivative(std::span<const double> samples, int order) {
  const long M = static_cast<long>(samples.size());
  auto c = fourier_coefficients(samples);
  for (long q = 0; q < M; ++q) {
    const long j = signed_bin(q, M);
    if (order % 2 == 1 && 2 * j == M) {
      c[q] = 0.0;
      continue;
    }
    c[q] *= std::pow(cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(j)), order);
  }
  for (auto& z : c) z *= static_cast<double>(M);
  auto x = ifft(c);
  std::vector<double> out(M);
  std::transform(x.begin(), x.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

}  // namespace gkdv
