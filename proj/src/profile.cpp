#include "gkdv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/quadrature.hpp"

namespace gkdv {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> potential_coeffs(const Nonlinearity& f, double c, double lambda) {
  auto w = poly::antiderivative(f.coefficients());
  if (w.size() < 3) w.resize(3, 0.0);
  w[1] -= lambda;
  w[2] -= 0.5 * c;
  return w;
}

// A closed loop around u0 written in the local variable s = u - u0.
// mu - W(u0 + s) = (s_plus - s)(s - s_minus) g(s) with g > 0 on the loop.
struct Loop {
  double u0 = 0.0;
  double s_minus = 0.0;
  double s_plus = 0.0;
  std::vector<double> g;
  double k = 0.0;
  int nodes = 0;

  double mid() const { return 0.5 * (s_plus + s_minus); }
  double half_width() const { return 0.5 * (s_plus - s_minus); }
  // Integrand of the period after u = u0 + mid + hw sin(theta).
  double h(double theta) const {
    return 1.0 / std::sqrt(2.0 * poly::eval(g, mid() + half_width() * std::sin(theta)));
  }
  // Scaled position of the point with angle theta on the descending half.
  double x_of(double theta) const {
    return k * integrate([&](double t) { return h(t); }, theta, 0.5 * pi, nodes);
  }
};

double find_root(const std::vector<double>& p, double sign, double h0) {
  double a = 0.0, b = sign * h0;
  int expansions = 0;
  while (poly::eval(p, b) > 0.0) {
    a = b;
    b *= 1.5;
    if (++expansions > 200 || !std::isfinite(b))
      throw Error(ErrorKind::open_level_set,
                  "no turning point found on the " + std::string(sign > 0 ? "upper" : "lower") +
                      " side; the level set is not a closed loop");
  }
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    (poly::eval(p, m) > 0.0 ? a : b) = m;
  }
  double s = 0.5 * (a + b);
  const auto dp = poly::derivative(p);
  for (int it = 0; it < 2; ++it) {
    const double d = poly::eval(dp, s);
    if (d == 0.0) break;
    const double s_new = s - poly::eval(p, s) / d;
    if (std::abs(poly::eval(p, s_new)) < std::abs(poly::eval(p, s))) s = s_new;
  }
  return s;
}

Loop build_loop(const Nonlinearity& f, double c, double lambda, double u0, double eps, int nodes) {
  if (!(eps > 0.0))
    throw Error(ErrorKind::empty_loop, "energy level does not exceed the potential at the critical point");
  const double w2 = f.eval(u0, 1) - c;
  if (!(w2 > 0.0)) throw Error(ErrorKind::not_a_minimizer, "W'' <= 0 at the enclosed critical point");

  // p(s) = mu - W(u0 + s), with the constant term taken as eps exactly.
  auto p = poly::taylor_shift(potential_coeffs(f, c, lambda), u0);
  for (auto& a : p) a = -a;
  p[0] = eps;

  const double h0 = 0.5 * std::sqrt(2.0 * eps / w2);
  Loop L;
  L.u0 = u0;
  L.nodes = nodes;
  L.s_plus = find_root(p, +1.0, h0);
  L.s_minus = find_root(p, -1.0, h0);

  const auto dp = poly::derivative(p);
  for (double s : {L.s_plus, L.s_minus}) {
    if (std::abs(poly::eval(dp, s)) <= 1e-7 * w2 * std::abs(s))
      throw Error(ErrorKind::open_level_set, "turning point is a critical point of W (homoclinic level set)");
  }

  // Deflate p by (s - s_plus)(s - s_minus); g = -quotient.
  std::vector<double> q(p);
  for (double r : {L.s_plus, L.s_minus}) {
    const std::size_t n = q.size();
    std::vector<double> out(n - 1);
    double carry = 0.0;
    for (std::size_t j = n; j-- > 1;) {
      carry = q[j] + carry * r;
      out[j - 1] = carry;
    }
    q = std::move(out);
  }
  L.g.resize(q.size());
  std::transform(q.begin(), q.end(), L.g.begin(), [](double a) { return -a; });

  const GaussLegendre& gl = gauss_legendre(nodes);
  for (double t : gl.nodes) {
    const double s = L.mid() + L.half_width() * std::sin(0.5 * pi * t);
    if (!(poly::eval(L.g, s) > 0.0))
      throw Error(ErrorKind::open_level_set, "potential reaches the energy level inside the loop");
  }
  for (double s : {L.s_plus, L.s_minus})
    if (!(poly::eval(L.g, s) > 0.0))
      throw Error(ErrorKind::open_level_set, "degenerate turning point");

  const double period = 2.0 * integrate([&](double t) { return L.h(t); }, -0.5 * pi, 0.5 * pi, nodes);
  L.k = 1.0 / period;
  return L;
}

WaveProfile sample_loop(const Loop& L, const WaveParameters& params, int M) {
  if (M < 32 || !is_power_of_two(M))
    throw Error(ErrorKind::argument, "profile grid size must be a power of two >= 32, got " + std::to_string(M));
  WaveProfile w;
  w.params = params;
  w.u0 = L.u0;
  w.k = L.k;
  w.u_plus = L.u0 + L.s_plus;
  w.u_minus = L.u0 + L.s_minus;
  w.samples.assign(M, 0.0);

  double prev = 0.5 * pi;
  for (int m = 0; m <= M / 2; ++m) {
    const double xm = static_cast<double>(m) / M;
    double t;
    if (m == 0) {
      t = 0.5 * pi;
    } else if (2 * m == M) {
      t = -0.5 * pi;
    } else {
      t = 0.5 * pi * (1.0 - 4.0 * xm);
      for (int it = 0; it < 60; ++it) {
        const double r = L.x_of(t) - xm;
        t += r / (L.k * L.h(t));
        t = std::clamp(t, -0.5 * pi, 0.5 * pi);
        if (std::abs(r) < 1e-15) break;
      }
    }
    if (t > prev) throw Error(ErrorKind::numerical_degeneracy, "profile inversion is not monotone");
    prev = t;
    w.samples[m] = L.u0 + L.mid() + L.half_width() * std::sin(t);
  }
  for (int m = M / 2 + 1; m < M; ++m) w.samples[m] = w.samples[M - m];
  // Endpoint values exactly at the turning points.
  w.samples[0] = w.u_plus;
  w.samples[M / 2] = w.u_minus;
  return w;
}

}  // namespace

double potential(const Nonlinearity& f, double u, double c, double lambda) {
  return f.antiderivative(u) - 0.5 * c * u * u - lambda * u;
}

double critical_point(const Nonlinearity& f, double c, double lambda, double guess) {
  auto residual = [&](double u) { return f.eval(u) - c * u - lambda; };
  auto scale = [&](double u) {
    return std::max({1.0, std::abs(lambda), std::abs(c * u), std::abs(f.eval(u))});
  };
  double u = guess;
  bool converged = false;
  // Iterate to a small step, not just a small residual, so double roots
  // (W'' = 0) are driven close enough to be recognised as degenerate.
  for (int it = 0; it < 100 && !converged; ++it) {
    const double r = residual(u);
    const double d = f.eval(u, 1) - c;
    if (r == 0.0) break;
    if (d == 0.0 || !std::isfinite(d)) break;
    const double step = r / d;
    u -= step;
    if (!std::isfinite(u)) break;
    converged = std::abs(step) <= 1e-14 * (1.0 + std::abs(u));
  }
  if (!std::isfinite(u) || std::abs(residual(u)) > 1e-13 * scale(u))
    throw Error(ErrorKind::no_critical_point,
                "Newton iteration for W' = 0 did not converge from guess " + std::to_string(guess));
  const double w2 = f.eval(u, 1) - c;
  if (!(w2 > 1e-8 * std::max(1.0, std::abs(c))))
    throw Error(ErrorKind::not_a_minimizer,
                "critical point u0 = " + std::to_string(u) + " has W'' = " + std::to_string(w2) + " <= 0");
  return u;
}

std::pair<double, double> turning_points(const Nonlinearity& f, const WaveParameters& params, double u0) {
  const Loop L = build_loop(f, params.c, params.lambda, u0,
                            params.mu - potential(f, u0, params.c, params.lambda), 64);
  return {L.u0 + L.s_minus, L.u0 + L.s_plus};
}

double wavenumber(const Nonlinearity& f, const WaveParameters& params, double u0, const ProfileOptions& opt) {
  return build_loop(f, params.c, params.lambda, u0, params.mu - potential(f, u0, params.c, params.lambda),
                    opt.quadrature_nodes)
      .k;
}

WaveProfile profile_samples(const Nonlinearity& f, const WaveParameters& params, double u0, int M,
                            const ProfileOptions& opt) {
  const Loop L = build_loop(f, params.c, params.lambda, u0,
                            params.mu - potential(f, u0, params.c, params.lambda), opt.quadrature_nodes);
  return sample_loop(L, params, M);
}

double small_amplitude_wavenumber(const Nonlinearity& f, double u0_guess, double c, double lambda,
                                  double delta, const ProfileOptions& opt) {
  const double u0 = critical_point(f, c, lambda, u0_guess);
  const double w2 = f.eval(u0, 1) - c;
  if (delta == 0.0) return std::sqrt(w2) / (2.0 * pi);
  return build_loop(f, c, lambda, u0, 0.5 * delta * delta * w2, opt.quadrature_nodes).k;
}

WaveProfile small_amplitude_wave(const Nonlinearity& f, double u0_guess, double c, double lambda,
                                 double delta, int M, const ProfileOptions& opt) {
  if (!(delta >= 0.0)) throw Error(ErrorKind::argument, "amplitude delta must be >= 0");
  const double u0 = critical_point(f, c, lambda, u0_guess);
  const double w2 = f.eval(u0, 1) - c;
  const double eps = 0.5 * delta * delta * w2;
  WaveParameters params{c, lambda, potential(f, u0, c, lambda) + eps};
  WaveProfile w;
  if (delta == 0.0) {
    if (M < 32 || !is_power_of_two(M))
      throw Error(ErrorKind::argument, "profile grid size must be a power of two >= 32, got " + std::to_string(M));
    w.params = params;
    w.u0 = u0;
    w.k = std::sqrt(w2) / (2.0 * pi);
    w.u_minus = w.u_plus = u0;
    w.samples.assign(M, u0);
  } else {
    w = sample_loop(build_loop(f, c, lambda, u0, eps, opt.quadrature_nodes), params, M);
  }
  w.delta = delta;
  return w;
}

WaveProfile signed_small_amplitude_wave(const Nonlinearity& f, double u0_guess, double c, double lambda,
                                        double delta, int M, const ProfileOptions& opt) {
  WaveProfile w = small_amplitude_wave(f, u0_guess, c, lambda, std::abs(delta), M, opt);
  if (delta < 0.0) {
    std::rotate(w.samples.begin(), w.samples.begin() + M / 2, w.samples.end());
    w.delta = delta;
  }
  return w;
}

double energy_residual(const Nonlinearity& f, const WaveProfile& w) {
  const auto dv = spectral_derivative(w.samples, 1);
  double worst = 0.0;
  for (int m = 0; m < w.M(); ++m) {
    const double e = 0.5 * w.k * w.k * dv[m] * dv[m] + potential(f, w.samples[m], w.params.c, w.params.lambda) -
                     w.params.mu;
    worst = std::max(worst, std::abs(e));
  }
  return worst;
}

ParameterDerivatives parameter_derivatives(const Nonlinearity& f, double u0, double c, double lambda,
                                           double delta, double h, const ProfileOptions& opt) {
  if (!(h > 0.0)) throw Error(ErrorKind::argument, "finite-difference step must be positive");
  const double hc = h * std::max(1.0, std::abs(c));
  const double hl = h * std::max(1.0, std::abs(lambda));
  const double hd = h * std::max(1.0, std::abs(delta));
  auto k_at = [&](double cc, double ll, double dd) {
    return small_amplitude_wavenumber(f, u0, cc, ll, std::abs(dd), opt);
  };

  ParameterDerivatives d;
  d.du0_dc = (critical_point(f, c + hc, lambda, u0) - critical_point(f, c - hc, lambda, u0)) / (2.0 * hc);
  d.du0_dlambda = (critical_point(f, c, lambda + hl, u0) - critical_point(f, c, lambda - hl, u0)) / (2.0 * hl);
  d.dk_dc = (k_at(c + hc, lambda, delta) - k_at(c - hc, lambda, delta)) / (2.0 * hc);
  d.dk_dlambda = (k_at(c, lambda + hl, delta) - k_at(c, lambda - hl, delta)) / (2.0 * hl);
  d.dk_ddelta = (k_at(c, lambda, delta + hd) - k_at(c, lambda, delta - hd)) / (2.0 * hd);
  d.wronskian = d.dk_dc * d.du0_dlambda - d.dk_dlambda * d.du0_dc;
  return d;
}

}  // namespace gkdv
