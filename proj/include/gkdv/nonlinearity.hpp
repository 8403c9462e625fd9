#pragma once

#include <optional>
#include <span>
#include <vector>

namespace gkdv {

/// Polynomial nonlinearity f of the gKdV equation u_t + (u_xx + f(u))_x = 0.
///
/// Stored as a dense coefficient list, constant term first. The power form
/// a*u^p is kept as a tag so configs round-trip unchanged.
class Nonlinearity {
 public:
  enum class Kind { power, polynomial };

  static Nonlinearity power(double a, int p);
  static Nonlinearity polynomial(std::vector<double> coeffs);

  /// d^order f / du^order at u. Only orders 0..3 are meaningful here.
  double eval(double u, int order = 0) const;
  /// F(u) with F' = f and F(0) = 0.
  double antiderivative(double u) const;

  Kind kind() const { return kind_; }
  double power_coefficient() const { return a_; }
  int power_exponent() const { return p_; }
  std::span<const double> coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

 private:
  Nonlinearity() = default;

  Kind kind_ = Kind::polynomial;
  double a_ = 0.0;
  int p_ = 0;
  std::vector<double> coeffs_;
};

enum class BFSign { stable, unstable, degenerate };

const char* to_string(BFSign sign);

struct BFIndex {
  double value = 0.0;
  BFSign sign = BFSign::degenerate;
  double u0 = 0.0;
  double c0 = 0.0;
  double tolerance = 0.0;
};

/// Benjamin-Feir index (f'')^2 - 3 f''' (f' - c0) at the state u0.
/// The default band is 1e-12 * max(1, f'(u0)^2).
BFIndex benjamin_feir_index(const Nonlinearity& f, double u0, double c0,
                            std::optional<double> tol_bf = std::nullopt);

namespace poly {

/// Horner evaluation, coefficients constant term first.
double eval(std::span<const double> c, double x);
std::vector<double> derivative(std::span<const double> c);
std::vector<double> antiderivative(std::span<const double> c);
/// Coefficients of p(x0 + s) as a polynomial in s.
std::vector<double> taylor_shift(std::span<const double> c, double x0);

}  // namespace poly

}  // namespace gkdv
