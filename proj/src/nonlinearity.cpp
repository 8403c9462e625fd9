#include "gkdv/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gkdv/error.hpp"

namespace gkdv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument error";
    case ErrorKind::precondition: return "precondition error";
    case ErrorKind::no_critical_point: return "no critical point";
    case ErrorKind::not_a_minimizer: return "not a minimizer";
    case ErrorKind::empty_loop: return "empty loop";
    case ErrorKind::open_level_set: return "open level set";
    case ErrorKind::numerical_degeneracy: return "numerical degeneracy";
    case ErrorKind::aliasing: return "aliasing error";
    case ErrorKind::eigensolver: return "eigensolver failure";
    case ErrorKind::radius: return "projector radius error";
    case ErrorKind::degenerate_parameterization: return "degenerate parameterization";
    case ErrorKind::transport: return "transport error";
    case ErrorKind::extraction: return "extraction error";
    case ErrorKind::instability: return "unstable spectrum";
    case ErrorKind::config: return "config error";
    case ErrorKind::io: return "io error";
  }
  return "error";
}

namespace poly {

double eval(std::span<const double> c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t n = 1; n < c.size(); ++n) d[n - 1] = static_cast<double>(n) * c[n];
  return d;
}

std::vector<double> antiderivative(std::span<const double> c) {
  std::vector<double> a(c.size() + 1, 0.0);
  for (std::size_t n = 0; n < c.size(); ++n) a[n + 1] = c[n] / static_cast<double>(n + 1);
  return a;
}

std::vector<double> taylor_shift(std::span<const double> c, double x0) {
  // Repeated synthetic division by (x - x0).
  std::vector<double> a(c.begin(), c.end());
  const std::size_t n = a.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t j = n - 1; j > k; --j) a[j - 1] += x0 * a[j];
  return a;
}

}  // namespace poly

Nonlinearity Nonlinearity::power(double a, int p) {
  if (a == 0.0 || !std::isfinite(a))
    throw Error(ErrorKind::argument, "power nonlinearity needs a finite nonzero coefficient");
  if (p < 2) throw Error(ErrorKind::argument, "power nonlinearity needs p >= 2");
  Nonlinearity f;
  f.kind_ = Kind::power;
  f.a_ = a;
  f.p_ = p;
  f.coeffs_.assign(static_cast<std::size_t>(p) + 1, 0.0);
  f.coeffs_[static_cast<std::size_t>(p)] = a;
  return f;
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorKind::argument, "polynomial coefficients must be finite");
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.size() < 3)
    throw Error(ErrorKind::argument,
                "polynomial nonlinearity needs a nonzero coefficient of degree >= 2");
  Nonlinearity f;
  f.kind_ = Kind::polynomial;
  f.coeffs_ = std::move(coeffs);
  return f;
}

double Nonlinearity::eval(double u, int order) const {
  if (order < 0 || order > 3)
    throw Error(ErrorKind::argument, "derivative order must be in 0..3, got " + std::to_string(order));
  std::vector<double> c = coeffs_;
  for (int k = 0; k < order; ++k) c = poly::derivative(c);
  return poly::eval(c, u);
}

double Nonlinearity::antiderivative(double u) const {
  return poly::eval(poly::antiderivative(coeffs_), u);
}

const char* to_string(BFSign sign) {
  switch (sign) {
    case BFSign::stable: return "stable";
    case BFSign::unstable: return "unstable";
    case BFSign::degenerate: return "degenerate";
  }
  return "degenerate";
}

BFIndex benjamin_feir_index(const Nonlinearity& f, double u0, double c0,
                            std::optional<double> tol_bf) {
  const double f1 = f.eval(u0, 1);
  const double stiffness = f1 - c0;
  if (!(stiffness > 0.0))
    throw Error(ErrorKind::precondition,
                "no small-amplitude family at this state (f'(u0) - c0 = " +
                    std::to_string(stiffness) + " <= 0)");
  const double f2 = f.eval(u0, 2);
  const double f3 = f.eval(u0, 3);

  BFIndex out;
  out.u0 = u0;
  out.c0 = c0;
  out.value = f2 * f2 - 3.0 * f3 * stiffness;
  out.tolerance = tol_bf.value_or(1e-12 * std::max(1.0, f1 * f1));
  if (out.value > out.tolerance)
    out.sign = BFSign::stable;
  else if (out.value < -out.tolerance)
    out.sign = BFSign::unstable;
  else
    out.sign = BFSign::degenerate;
  return out;
}

}  // namespace gkdv
