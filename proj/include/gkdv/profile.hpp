#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gkdv/nonlinearity.hpp"

namespace gkdv {

struct WaveParameters {
  double c = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

/// Scaled, even, 1-periodic wave profile sampled on x_m = m/M with its
/// maximum at x = 0.
struct WaveProfile {
  WaveParameters params;
  double u0 = 0.0;
  std::optional<double> delta;
  double k = 0.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  std::vector<double> samples;

  int M() const { return static_cast<int>(samples.size()); }
};

struct ProfileOptions {
  int quadrature_nodes = 200;
};

/// W(u; c, lambda) = F(u) - c u^2 / 2 - lambda u.
double potential(const Nonlinearity& f, double u, double c, double lambda);

/// Newton on W' = f(u) - c u - lambda. Throws no_critical_point when the
/// iteration does not converge and not_a_minimizer when W'' <= 0 at the root.
double critical_point(const Nonlinearity& f, double c, double lambda, double guess);

std::pair<double, double> turning_points(const Nonlinearity& f, const WaveParameters& params, double u0);

double wavenumber(const Nonlinearity& f, const WaveParameters& params, double u0,
                  const ProfileOptions& opt = {});

WaveProfile profile_samples(const Nonlinearity& f, const WaveParameters& params, double u0, int M,
                            const ProfileOptions& opt = {});

/// Wave with energy level W(u0) + delta^2 W''(u0) / 2; delta = 0 gives the
/// constant state.
WaveProfile small_amplitude_wave(const Nonlinearity& f, double u0_guess, double c, double lambda,
                                 double delta, int M, const ProfileOptions& opt = {});

/// The same family continued to negative delta by a half-period shift, so
/// that delta -> v_delta is smooth through 0.
WaveProfile signed_small_amplitude_wave(const Nonlinearity& f, double u0_guess, double c,
                                        double lambda, double delta, int M,
                                        const ProfileOptions& opt = {});

/// max_m |k^2 v'(x_m)^2 / 2 + W(v(x_m)) - mu|, v' spectral.
double energy_residual(const Nonlinearity& f, const WaveProfile& w);

struct ParameterDerivatives {
  double du0_dc = 0.0;
  double du0_dlambda = 0.0;
  double dk_dc = 0.0;
  double dk_dlambda = 0.0;
  double dk_ddelta = 0.0;
  double wronskian = 0.0;
};

/// Centered differences of u0(c, lambda) and k_delta(c, lambda) with step
/// h * max(1, |parameter|); dk_ddelta uses the signed family.
ParameterDerivatives parameter_derivatives(const Nonlinearity& f, double u0, double c, double lambda,
                                           double delta, double h = 1e-4,
                                           const ProfileOptions& opt = {});

/// Wavenumber of the small-amplitude family without sampling the profile.
double small_amplitude_wavenumber(const Nonlinearity& f, double u0_guess, double c, double lambda,
                                  double delta, const ProfileOptions& opt = {});

}  // namespace gkdv
