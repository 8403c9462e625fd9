#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/profile.hpp"

using namespace gkdv;
constexpr double pi = std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::io;
}

const Nonlinearity kdv = Nonlinearity::power(1.0, 2);
const Nonlinearity mkdv = Nonlinearity::power(1.0, 3);

// Second-order small-amplitude expansions of v and k.
double v_expansion(const Nonlinearity& f, double u0, double c, double d, double x) {
  const double s = f.eval(u0, 1) - c;
  return u0 + d * std::cos(2 * pi * x) + d * d * f.eval(u0, 2) / (12 * s) * (std::cos(4 * pi * x) - 3);
}
double k_expansion(const Nonlinearity& f, double u0, double c, double d) {
  const double s = f.eval(u0, 1) - c, f2 = f.eval(u0, 2), f3 = f.eval(u0, 3);
  return std::sqrt(s) / (2 * pi) + d * d / (32 * pi * std::sqrt(s)) * (f3 - 5 * f2 * f2 / (3 * s));
}

double bisect(auto&& g, double a, double b) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (g(a) < 0) == (g(m) < 0) ? a = m : b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("potential") {
  CHECK(potential(kdv, 0.0, 3.0, -2.0) == 0.0);
  CHECK(potential(kdv, 1.0, 0.0, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(potential(kdv, 1.0, 2.0, 1.0) == doctest::Approx(-5.0 / 3.0));
}

TEST_CASE("critical points") {
  CHECK(critical_point(kdv, -1.0, 0.0, 0.1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(critical_point(kdv, 0.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kind_of([] { critical_point(kdv, 0.0, 0.0, 0.1); }) == ErrorKind::not_a_minimizer);
  // u^2 + 1 = 0 has no real root: Newton wanders.
  CHECK(kind_of([] { critical_point(kdv, 0.0, -1.0, 0.3); }) == ErrorKind::no_critical_point);
  // The maximum of W at u = -1 is a root of W' with W'' < 0.
  CHECK(kind_of([] { critical_point(kdv, -1.0, 0.0, -0.9); }) == ErrorKind::not_a_minimizer);
}

TEST_CASE("turning points against a bisection oracle") {
  const WaveParameters p{-1.0, 0.0, 0.01};
  const auto [um, up] = turning_points(kdv, p, 0.0);
  auto g = [](double u) { return u * u * u / 3 + u * u / 2 - 0.01; };
  CHECK(um == doctest::Approx(bisect(g, -0.9, 0.0)).epsilon(1e-13));
  CHECK(up == doctest::Approx(bisect(g, 0.0, 1.0)).epsilon(1e-13));
  CHECK(um < 0.0);
  CHECK(up > 0.0);
}

TEST_CASE("turning points shrink symmetrically as the loop closes") {
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const auto [um, up] = turning_points(kdv, {-1.0, 0.0, eps}, 0.0);
    const double r = std::sqrt(2 * eps);  // W'' = 1
    CHECK(up / r == doctest::Approx(1.0).epsilon(2 * r));
    CHECK(-um / r == doctest::Approx(1.0).epsilon(2 * r));
  }
}

TEST_CASE("level-set errors") {
  CHECK(kind_of([] { turning_points(kdv, {-1.0, 0.0, 0.0}, 0.0); }) == ErrorKind::empty_loop);
  CHECK(kind_of([] { turning_points(kdv, {-1.0, 0.0, -0.1}, 0.0); }) == ErrorKind::empty_loop);
  CHECK(kind_of([] { turning_points(kdv, {-1.0, 0.0, 1.0 / 6.0}, 0.0); }) == ErrorKind::open_level_set);
  CHECK(kind_of([] { small_amplitude_wave(kdv, 0.0, -1.0, 0.0, 0.7, 128); }) == ErrorKind::open_level_set);
}

TEST_CASE("wavenumber limits") {
  const double k = wavenumber(kdv, {-1.0, 0.0, 0.001}, 0.0);
  const double d = std::sqrt(2 * 0.001);
  CHECK(std::abs(k - 1 / (2 * pi)) < d * d);
  CHECK(std::abs(k - k_expansion(kdv, 0.0, -1.0, d)) < 1e-6);
  // Linear oscillator: T -> 2 pi / sqrt(W'').
  const double kh = wavenumber(kdv, {-3.0, 0.0, 1e-10}, 0.0);
  CHECK(1 / kh == doctest::Approx(2 * pi / std::sqrt(3.0)).epsilon(1e-5));
}

TEST_CASE("wavenumber is converged in the quadrature") {
  const WaveParameters p{-1.0, 0.0, 0.05};
  const double a = wavenumber(kdv, p, 0.0, {200});
  const double b = wavenumber(kdv, p, 0.0, {400});
  CHECK(std::abs(a - b) < 1e-10 * a);
}

TEST_CASE("profile invariants") {
  for (double delta : {0.02, 0.1, 0.3}) {
    const WaveProfile w = small_amplitude_wave(kdv, 0.0, -1.0, 0.0, delta, 128);
    const int M = w.M();
    for (int m = 1; m < M; ++m) CHECK(w.samples[m] == doctest::Approx(w.samples[M - m]).epsilon(1e-13));
    CHECK(w.samples[0] == doctest::Approx(w.u_plus).epsilon(1e-13));
    CHECK(w.samples[M / 2] == doctest::Approx(w.u_minus).epsilon(1e-12));
    CHECK(energy_residual(kdv, w) <= 1e-8 * (1 + std::abs(w.params.mu)));
    REQUIRE(w.delta.has_value());
    CHECK(*w.delta == delta);
  }
  const WaveProfile m = small_amplitude_wave(mkdv, 1.0, -1.0, 2.0, 0.2, 256);
  CHECK(energy_residual(mkdv, m) <= 1e-8 * (1 + std::abs(m.params.mu)));
}

TEST_CASE("delta = 0 gives the constant state") {
  const WaveProfile w = small_amplitude_wave(mkdv, 0.9, -1.0, 2.0, 0.0, 64);
  for (double v : w.samples) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w.k == doctest::Approx(std::sqrt(4.0) / (2 * pi)).epsilon(1e-14));
}

TEST_CASE("expansion orders: v to third order, k to fourth") {
  auto errors = [](double d) {
    const WaveProfile w = small_amplitude_wave(kdv, 0.0, -1.0, 0.0, d, 256);
    double ev = 0;
    for (int m = 0; m < w.M(); ++m)
      ev = std::max(ev, std::abs(w.samples[m] - v_expansion(kdv, 0.0, -1.0, d, static_cast<double>(m) / w.M())));
    return std::pair{ev, std::abs(w.k - k_expansion(kdv, 0.0, -1.0, d))};
  };
  const auto [v1, k1] = errors(0.1);
  const auto [v2, k2] = errors(0.05);
  CHECK(v1 / v2 >= 6);
  CHECK(v1 / v2 <= 10);
  CHECK(k1 / k2 >= 12);
  CHECK(k1 / k2 <= 20);
}

TEST_CASE("small amplitude profile approaches u0 + delta cos") {
  const double d = 1e-3;
  const WaveProfile w = small_amplitude_wave(mkdv, 1.0, -1.0, 2.0, d, 64);
  for (int m = 0; m < 64; ++m) CHECK(std::abs(w.samples[m] - 1.0 - d * std::cos(2 * pi * m / 64.0)) < 10 * d * d);
}

TEST_CASE("signed family is the half-period shift") {
  const WaveProfile p = signed_small_amplitude_wave(kdv, 0.0, -1.0, 0.0, 0.1, 64);
  const WaveProfile n = signed_small_amplitude_wave(kdv, 0.0, -1.0, 0.0, -0.1, 64);
  for (int m = 0; m < 64; ++m) CHECK(n.samples[m] == p.samples[(m + 32) % 64]);
  CHECK(n.k == p.k);
}

TEST_CASE("parameter derivatives and the Wronskian") {
  const auto pd = parameter_derivatives(kdv, 0.0, -1.0, 0.0, 0.0);
  CHECK(pd.wronskian == doctest::Approx(-1 / (4 * pi)).epsilon(1e-6));
  // Centered difference with h = 1e-4: error h^2 |u0'''| / 6 ~ 2e-8.
  CHECK(pd.du0_dlambda == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(pd.dk_ddelta) < 1e-10);
  const auto pm = parameter_derivatives(mkdv, 1.0, -1.0, 2.0, 0.0);
  CHECK(pm.wronskian == doctest::Approx(-1 / (4 * pi * std::pow(4.0, 1.5))).epsilon(1e-6));
  CHECK(pm.du0_dlambda == doctest::Approx(1.0 / 4.0).epsilon(1e-8));
  // Off the origin dk/ddelta follows the k expansion: 2 delta times its delta^2 coefficient.
  const auto pk = parameter_derivatives(kdv, 0.0, -1.0, 0.0, 0.05);
  CHECK(pk.dk_ddelta == doctest::Approx(2 * 0.05 * (-20.0 / 3.0) / (32 * pi)).epsilon(2e-2));
}
