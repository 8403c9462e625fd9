#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/spectrum.hpp"

using namespace gkdv;
constexpr double pi = std::numbers::pi;

namespace {

const Nonlinearity kdv = Nonlinearity::power(1.0, 2);
const Nonlinearity mkdv = Nonlinearity::power(1.0, 3);

WaveProfile kdv_wave(double delta, int M = 128) { return small_amplitude_wave(kdv, 0.0, -1.0, 0.0, delta, M); }

double set_distance(const CVector& a, const CVector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = INFINITY;
    for (Eigen::Index j = 0; j < b.size(); ++j) best = std::min(best, std::abs(a[i] - b[j]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("delta = 0 eigenvalues are the dispersion relation") {
  const WaveProfile w = kdv_wave(0.0);
  const auto es = eigs(HillOperator(w, kdv, 8).at(0.3));
  std::vector<cplx> expect;
  for (int n = -8; n <= 8; ++n) expect.push_back(constant_state_symbol(w.k, 2 * pi * n + 0.3));
  std::sort(expect.begin(), expect.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
  REQUIRE(es.values.size() == 17);
  for (int i = 0; i < 17; ++i) CHECK(std::abs(es.values[i] - expect[i]) <= 1e-12 * std::max(1.0, std::abs(expect[i])));
  for (int i = 1; i < 17; ++i) CHECK(es.values[i - 1].imag() <= es.values[i].imag());
}

TEST_CASE("zero is an eigenvalue at xi = 0 with the profile derivative as eigenvector") {
  for (double delta : {0.05, 0.1, 0.2}) {
    const WaveProfile w = kdv_wave(delta);
    const int N = 16;
    const auto es = eigs(HillOperator(w, kdv, N).at(0.0));
    Eigen::Index i0 = 0;
    es.values.cwiseAbs().minCoeff(&i0);
    CHECK(std::abs(es.values[i0]) < 1e-10);
    // Its kernel contains v': coefficients 2 pi i n v-hat_n.
    const auto vc = fourier_coefficients(w.samples);
    CVector dv(2 * N + 1);
    for (int n = -N; n <= N; ++n) dv[n + N] = cplx(0, 2 * pi * n) * vc[(n + w.M()) % w.M()];
    CHECK((HillOperator(w, kdv, N).at(0.0).matrix * dv).norm() < 1e-10 * dv.norm());
  }
}

TEST_CASE("left and right eigenvectors are biorthogonal") {
  const auto es = eigs(HillOperator(kdv_wave(0.1), kdv, 12).at(0.7));
  const CMatrix G = es.left.adjoint() * es.right;
  CHECK((G - CMatrix::Identity(G.rows(), G.cols())).norm() < 1e-9);
  for (Eigen::Index i = 0; i < es.right.cols(); ++i) CHECK(es.right.col(i).norm() == doctest::Approx(1.0));
}

TEST_CASE("Hamiltonian symmetry of the spectrum") {
  CVector single(1);
  single[0] = cplx(0, 1);
  CHECK(hamiltonian_symmetry_residual(single) == 0.0);
  CVector pair(2);
  pair << cplx(0.5, 1), cplx(0.4, 1);
  CHECK(hamiltonian_symmetry_residual(pair) == doctest::Approx(0.9));

  const WaveProfile w0 = kdv_wave(0.0);
  const double k3 = w0.k * w0.k * w0.k;
  CHECK(hamiltonian_symmetry_residual(eigs(HillOperator(w0, kdv, 16).at(0.4)).values) <= 1e-15 * k3 * 1e4);
  const WaveProfile w = kdv_wave(0.1);
  const int N = 24;
  const double window = trusted_radius(w.k, N);
  for (double xi : {0.0, 0.2, 1.3, pi}) {
    const CVector ev = eigs(HillOperator(w, kdv, N).at(xi)).values;
    CHECK(hamiltonian_symmetry_residual(ev, window) <= 1e-8 * window);
  }
}

TEST_CASE("conjugation symmetry in xi") {
  const WaveProfile w = kdv_wave(0.15);
  const HillOperator op(w, kdv, 16);
  for (double xi : {0.3, 1.1, 2.9}) {
    const CVector a = eigs(op.at(xi)).values;
    const CVector b = eigs(op.at(-xi)).values.conjugate();
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK(set_distance(a, b) <= 1e-10 * scale);
    CHECK(set_distance(b, a) <= 1e-10 * scale);
  }
}

TEST_CASE("eigenvalues in the trusted window are stable under N -> N + 8") {
  const WaveProfile w = kdv_wave(0.1, 256);
  const int N = 24;
  const double window = trusted_radius(w.k, N);
  CHECK(window == doctest::Approx(w.k * w.k * w.k * std::pow(pi * N / 2, 3)));
  const double k3 = w.k * w.k * w.k;
  for (double xi : {0.0, 0.5, -2.0, pi}) {
    const CVector a = eigs(HillOperator(w, kdv, N).at(xi)).values;
    const CVector b = eigs(HillOperator(w, kdv, N + 8).at(xi)).values;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (std::abs(a[i]) > window) continue;
      // The triple zero at xi = 0 is defective, so its computed members
      // scatter like sqrt(machine eps); only their count inside the default
      // origin radius 1e-4 k^3 is checked.
      if (xi == 0.0 && std::abs(a[i]) < 1e-4 * k3) continue;
      double best = INFINITY;
      for (Eigen::Index j = 0; j < b.size(); ++j) best = std::min(best, std::abs(a[i] - b[j]));
      CHECK(best <= 1e-8 * std::max(std::abs(a[i]), k3));
    }
    if (xi == 0.0) {
      auto near_zero = [&](const CVector& v) { return (v.array().abs() < 1e-4 * k3).count(); };
      CHECK(near_zero(a) == 3);
      CHECK(near_zero(b) == 3);
    }
  }
}

TEST_CASE("tracked curves at delta = 0 are the shifted dispersion relation") {
  const WaveProfile w = kdv_wave(0.0);
  const auto cs = track_curves(w, kdv, floquet_grid(64), 16);
  REQUIRE(cs.curves.size() >= 5);
  for (const auto& c : cs.curves) {
    for (std::size_t i = 0; i < c.xi.size(); ++i) {
      const cplx lam = constant_state_symbol(w.k, 2 * pi * c.label + c.xi[i]);
      CHECK(std::abs(c.lambdas[i] - lam) <= 1e-12 * std::max(1.0, std::abs(lam)));
    }
    CHECK(c.end_label == c.label);
  }
  CHECK(cs.collisions == 0);
}

TEST_CASE("tracked curves for a small KdV wave") {
  const WaveProfile w = kdv_wave(0.1);
  const auto grid = floquet_grid(64);
  const auto cs = track_curves(w, kdv, grid, 16);
  CHECK(cs.gluing_residual <= 1e-8);
  CHECK(cs.curves.size() >= 5);
  // Exactly three curves pass through 0 at xi = 0 (last grid index before 0 is n/2 - 1).
  const std::size_t i0 = grid.size() / 2 - 1;
  REQUIRE(grid[i0] == doctest::Approx(0.0));
  int through_zero = 0;
  double min_other = INFINITY;
  for (const auto& c : cs.curves) {
    const auto it = std::find_if(c.xi.begin(), c.xi.end(), [](double x) { return std::abs(x) < 1e-14; });
    REQUIRE(it != c.xi.end());
    const double a = std::abs(c.lambdas[it - c.xi.begin()]);
    if (a < 1e-8)
      ++through_zero;
    else
      min_other = std::min(min_other, a);
  }
  CHECK(through_zero == 3);
  CHECK(min_other > 1e-3);
  // Continuity and phase continuity of eigenvectors.
  for (const auto& c : cs.curves) {
    double dmax = 0.0;
    for (std::size_t i = 1; i < c.xi.size(); ++i) dmax = std::max(dmax, std::abs(c.lambdas[i] - c.lambdas[i - 1]));
    CHECK(dmax < 0.5 * cs.window_radius);
    for (std::size_t i = 1; i < c.eigvecs.size(); ++i) CHECK(c.eigvecs[i - 1].dot(c.eigvecs[i]).real() > 0.0);
  }
}

TEST_CASE("stability verdicts") {
  SUBCASE("KdV small wave is dispersively stable") {
    const auto run = analyze_stability(kdv_wave(0.1), kdv, 24, 64);
    CHECK(run.report.verdict == Verdict::dispersively_stable);
    CHECK(run.report.origin_multiplicity == 3);
    CHECK(run.report.failed_conditions.empty());
    CHECK(run.report.min_slope_separation > run.report.tolerances.slope_tol);
    CHECK(run.report.min_third_derivative > run.report.tolerances.curv_tol);
  }
  SUBCASE("the constant state is degenerate, not unstable") {
    const WaveProfile w = kdv_wave(0.0);
    const auto run = analyze_stability(w, kdv, 16, 64);
    CHECK(run.report.verdict == Verdict::degenerate);
    // Lambda'(+-2 pi) = 8 pi^2 i k^3 for both neighbours of 0.
    const double k3 = w.k * w.k * w.k;
    int hits = 0;
    for (cplx s : run.report.origin_slopes)
      if (std::abs(s - cplx(0, 8 * pi * pi * k3)) < 1e-4 * k3) ++hits;
    CHECK(hits == 2);
  }
  SUBCASE("mKdV small wave is spectrally unstable") {
    const WaveProfile w = small_amplitude_wave(mkdv, 1.0, -1.0, 2.0, 0.08, 128);
    const auto run = analyze_stability(w, mkdv, 24, 64);
    CHECK(run.report.verdict == Verdict::spectrally_unstable);
    CHECK(run.report.max_real_part > run.report.tolerances.tol_re);
  }
  CHECK(std::string(to_string(Verdict::dispersively_stable)) == "dispersively_stable");
}

TEST_CASE("high-frequency residuals") {
  const WaveProfile w0 = kdv_wave(0.0, 256);
  const double k3 = w0.k * w0.k * w0.k;
  const auto c0 = track_curves(w0, kdv, floquet_grid(64), 48);
  const auto r0 = high_frequency_residuals(c0);
  REQUIRE(!r0.empty());
  for (const auto& r : r0) {
    CHECK(std::abs(r.label) >= 3);
    CHECK(std::abs(r.label) <= 24);
    const auto& curve = *std::find_if(c0.curves.begin(), c0.curves.end(), [&](auto& c) { return c.label == r.label; });
    double expect = 0.0;
    for (double xi : curve.xi) expect = std::max(expect, 4 * pi * pi * k3 * std::abs(2 * pi * r.label + xi) / std::abs(r.label));
    CHECK(r.residual_per_mode == doctest::Approx(expect).epsilon(1e-9));
  }
  const WaveProfile w = kdv_wave(0.1, 256);
  const auto c1 = track_curves(w, kdv, floquet_grid(64), 48);
  const double ref = 8 * pi * pi * pi * w.k * w.k * w.k;
  for (const auto& r : high_frequency_residuals(c1)) {
    if (std::abs(r.label) < 5 || std::abs(r.label) > 12) continue;
    CHECK(r.residual_per_mode < 2 * ref);
    CHECK(r.residual_per_mode > 0.5 * ref);
  }
}

TEST_CASE("eigenfunction asymptotics") {
  const auto e0 = eigenfunction_asymptotics(HillOperator(kdv_wave(0.0), kdv, 32), 4, 16);
  CHECK(e0.conclusive);
  for (double d : e0.deviation) CHECK(d == 0.0);
  const auto e1 = eigenfunction_asymptotics(HillOperator(kdv_wave(0.1), kdv, 32), 4, 16);
  REQUIRE(e1.conclusive);
  CHECK(e1.deviation_slope <= -0.9);
  CHECK(e1.mismatch_slope <= -1.8);
  CHECK_FALSE(eigenfunction_asymptotics(HillOperator(kdv_wave(0.1), kdv, 32), 4, 6).conclusive);
  CHECK_THROWS_AS(eigenfunction_asymptotics(HillOperator(kdv_wave(0.1), kdv, 16), 4, 12), Error);
}

TEST_CASE("loglog slope") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 / (v * v));
  CHECK(loglog_slope(x, y) == doctest::Approx(-2.0));
}

TEST_CASE("verdict follows the Benjamin-Feir sign for small amplitudes") {
  for (double delta : {0.05, 0.15}) {
    const auto kd = analyze_stability(kdv_wave(delta), kdv, 16, 64);
    CHECK(kd.report.verdict == Verdict::dispersively_stable);
    const auto mk = analyze_stability(small_amplitude_wave(mkdv, 1.0, -1.0, 2.0, delta, 128), mkdv, 16, 64);
    CHECK(mk.report.verdict == Verdict::spectrally_unstable);
  }
}
