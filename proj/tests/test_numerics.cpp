#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/linalg.hpp"
#include "gkdv/parallel.hpp"
#include "gkdv/quadrature.hpp"

using namespace gkdv;
constexpr double pi = std::numbers::pi;

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  CHECK_THROWS_AS(gauss_legendre(1), Error);
  for (int n : {2, 5, 16, 200}) {
    const auto& gl = gauss_legendre(n);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0;
    for (double w : gl.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1 && d <= 40; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(integrate([&](double x) { return std::pow(x, d); }, -1.0, 1.0, n) ==
            doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("Gauss-Legendre on a smooth integrand") {
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 20) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-15));
}

TEST_CASE("fft and ifft are inverse") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  std::vector<cplx> x(64);
  for (auto& v : x) v = {nd(rng), nd(rng)};
  const auto y = ifft(fft(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-14);
}

TEST_CASE("Fourier coefficients and spectral derivatives of trigonometric data") {
  const int M = 32;
  std::vector<double> s(M), c3(M);
  for (int m = 0; m < M; ++m) {
    const double x = static_cast<double>(m) / M;
    s[m] = std::sin(2 * pi * x);
    c3[m] = std::cos(6 * pi * x);
  }
  const auto c = fourier_coefficients(c3);
  CHECK(std::abs(c[3] - 0.5) < 1e-15);
  CHECK(std::abs(c[M - 3] - 0.5) < 1e-15);
  const auto d = spectral_derivative(s, 1);
  const auto d2 = spectral_derivative(s, 2);
  for (int m = 0; m < M; ++m) {
    const double x = static_cast<double>(m) / M;
    CHECK(d[m] == doctest::Approx(2 * pi * std::cos(2 * pi * x)).scale(1.0).epsilon(1e-12));
    CHECK(d2[m] == doctest::Approx(-4 * pi * pi * std::sin(2 * pi * x)).scale(1.0).epsilon(1e-11));
  }
  CHECK(signed_bin(17, 32) == -15);
  CHECK(signed_bin(16, 32) == 16);
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(48));
}

TEST_CASE("eig returns biorthogonal left and right vectors") {
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  CMatrix A(9, 9);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = {nd(rng), nd(rng)};
  const EigenSystem es = eig(A);
  CHECK((A * es.right - es.right * es.values.asDiagonal()).norm() < 1e-12);
  CHECK((es.left.adjoint() * A - es.values.asDiagonal() * es.left.adjoint()).norm() < 1e-11);
  CHECK((es.left.adjoint() * es.right - CMatrix::Identity(9, 9)).norm() < 1e-10);
  for (Eigen::Index i = 1; i < es.values.size(); ++i) CHECK(es.values[i - 1].imag() <= es.values[i].imag());
}

TEST_CASE("Schur projector agrees with the contour integral") {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  CMatrix A = CMatrix::Zero(8, 8);
  const double diag[8] = {0.01, -0.02, 0.015, 3, -4, 5, 2.5, -3.5};
  for (int i = 0; i < 8; ++i) A(i, i) = diag[i];
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) A(i, j) = 0.3 * nd(rng);
  CMatrix S(8, 8);
  for (Eigen::Index i = 0; i < S.size(); ++i) S.data()[i] = {nd(rng), nd(rng)};
  S += 4.0 * CMatrix::Identity(8, 8);
  const CMatrix B = S * A * S.inverse();
  const auto sub = invariant_subspace(B, 0.0, 1.0);
  CHECK(sub.dim == 3);
  CHECK((sub.projector * sub.projector - sub.projector).norm() < 1e-10);
  CHECK((contour_projector(B, 0.0, 1.0, 64) - sub.projector).norm() < 1e-8);
  CHECK((sub.dual.adjoint() * sub.basis - CMatrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((B * sub.basis - sub.basis * sub.T11).norm() < 1e-10);
  CHECK(sub.nearest_outside == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("invariant subspace through a Jordan block") {
  CMatrix J = CMatrix::Zero(5, 5);
  J(0, 1) = 1.0;
  J(1, 2) = 1.0;
  J(3, 3) = 2.0;
  J(4, 4) = -2.0;
  J(0, 3) = 0.5;
  const auto sub = invariant_subspace(J, 0.0, 1.0);
  CHECK(sub.dim == 3);
  CHECK((sub.projector * sub.projector - sub.projector).norm() < 1e-12);
  CHECK((J * sub.projector - sub.projector * J).norm() < 1e-12);
}

TEST_CASE("matrix exponential of a rotation generator") {
  CMatrix A(2, 2);
  A << 0.0, -1.0, 1.0, 0.0;
  const CMatrix E = matrix_exp(0.7 * A);
  CHECK(std::abs(E(0, 0) - std::cos(0.7)) < 1e-14);
  CHECK(std::abs(E(1, 0) - std::sin(0.7)) < 1e-14);
}

TEST_CASE("parallel_map is slot-ordered and independent of the worker count") {
  for (int threads : {1, 2, 5}) {
    const auto v = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); }, threads);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  }
  const auto empty = parallel_map<int>(0, [](std::size_t) { return 1; }, 3);
  CHECK(empty.empty());
}

TEST_CASE("parallel_map rethrows the lowest failing index") {
  auto fn = [](std::size_t i) -> int {
    if (i == 7 || i == 3) throw std::runtime_error("bad " + std::to_string(i));
    return 0;
  };
  for (int threads : {1, 4}) {
    try {
      parallel_map<int>(20, fn, threads);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "bad 3");
    }
  }
}
