#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gkdv/bloch.hpp"
#include "gkdv/linalg.hpp"
#include "gkdv/profile.hpp"

namespace gkdv {

using Matrix3c = Eigen::Matrix3cd;
using Matrix3d = Eigen::Matrix3d;

/// Small-amplitude waves around the critical point selected by u0_guess,
/// continued to negative delta by the half-period shift.
struct SmallAmplitudeFamily {
  Nonlinearity f = Nonlinearity::power(1.0, 2);
  double u0_guess = 0.0;
  double c = 0.0;
  double lambda = 0.0;
  int M = 128;
  int N = 16;
  ProfileOptions profile_options{};
  double fd_step = 1e-4;  // relative step for d/dc, d/dlambda

  WaveProfile profile(double delta) const;
  HillOperator hill(double delta) const;
  double u0() const;
  double k0() const;
  /// Step for d/ddelta: 1e-2 max(|delta|, 0.05).
  double delta_step(double delta) const;
};

struct OriginProjector {
  CMatrix projector;
  InvariantSubspace subspace;
  double radius = 0.0;
  double idempotency_residual = 0.0;
};

/// Rank-3 spectral projector for the eigenvalues inside |lambda| < radius.
/// radius <= 0 picks half the modulus of the fourth-smallest eigenvalue.
OriginProjector origin_projector(const BlochSymbol& symbol, double radius = 0.0);

struct OriginBasis {
  double delta = 0.0;
  std::array<CVector, 3> q;
  std::array<CVector, 3> dual;
  double wronskian_denominator = 0.0;
  double range_residual = 0.0;      // ||(I - Pi) q_j|| before projection
  double biorthogonality_residual = 0.0;
  double radius = 0.0;              // projector circle used at xi = 0
  double E12 = 0.0;                 // closed-form coefficients, for cross-checks
  double E13 = 0.0;
};

/// Coefficient vector (modes -N..N) of a 1-periodic real sample array.
CVector mode_vector(const std::vector<double>& samples, int N);

OriginBasis basis_at_origin(const SmallAmplitudeFamily& fam, double delta);

struct TransportOptions {
  double step = 1e-3;
  double diff_step = 1e-4;
  double xi_max = 0.5;
};

struct TransportedBasis {
  double xi = 0.0;
  std::array<CVector, 3> q;
  std::array<CVector, 3> dual;
  double range_residual = 0.0;
};

/// Integrates dU/dxi = [dPi/dxi, Pi] U from 0 with classical RK4 and applies
/// it to the basis; the outputs are returned at every requested target.
std::vector<TransportedBasis> kato_transport(const HillOperator& op, const OriginBasis& basis,
                                             const std::vector<double>& xi_targets,
                                             const TransportOptions& opt = {});

struct ReducedMatrix {
  double xi = 0.0;
  double delta = 0.0;
  Matrix3c D;
  Matrix3c Dtilde;   // only meaningful when has_tilde
  bool has_tilde = false;
  Matrix3d B;        // B(j, l); entries needing xi or delta in the denominator are NaN when that is 0
  double structure_residual = 0.0;
  double tilde_error = 0.0;  // Richardson estimate when xi = 0
};

/// D = (<dual_j, L_xi q_l>) and its blow-up; xi = 0 gives Dtilde by
/// Richardson extrapolation from xi in {1e-2, 5e-3, 2.5e-3}.
ReducedMatrix reduced_matrix(const SmallAmplitudeFamily& fam, double delta, double xi,
                             const TransportOptions& opt = {});
ReducedMatrix reduced_matrix(const SmallAmplitudeFamily& fam, const OriginBasis& basis, double xi,
                             const TransportOptions& opt = {});

/// Max deviation from the real/imaginary pattern of the structured form.
double structure_residual(const Matrix3c& D);

struct SplitEigenvalues {
  cplx plus;
  cplx minus;
  cplx third;
};

struct BFDecomposition {
  double k0 = 0.0;
  double bf_index = 0.0;
  // Limits at (xi, delta) = (0, 0).
  double B21 = 0.0;
  double B13 = 0.0;
  double B32 = 0.0;
  double d2B12_ddelta2 = 0.0;
  double d2B12_dxi2 = 0.0;
  double dB11_ddelta = 0.0;
  double dB22_ddelta = 0.0;
  double B22_minus_B33 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double identity_lhs = 0.0;
  double identity_rhs = 0.0;
  double identity_error_estimate = 0.0;
  double b_coefficient = 0.0;   // 1/2 B21 d2B12/dxi2
  double max_structure_residual = 0.0;
  // Evaluation at the requested (xi, delta).
  double xi = 0.0;
  double delta = 0.0;
  double discriminant = 0.0;
  double discriminant_from_eigenvalues = 0.0;
  SplitEigenvalues split{};
};

struct BFOptions {
  double h_xi = 1e-2;
  double h_delta = 2e-2;
  double struct_tol = 1e-7;  // relative to ||D||; larger residuals abort the extraction
  int threads = 0;
  TransportOptions transport{};
};

BFDecomposition bf_decomposition(const SmallAmplitudeFamily& fam, double delta, double xi, const BFOptions& opt = {});

/// Delta^{xi,delta} from the blow-up matrix through the (alpha1, alpha2)
/// triangularization, with the alphas found by fixed-point iteration.
struct Triangularization {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double discriminant = 0.0;
  SplitEigenvalues split{};
};
Triangularization triangularize(const Matrix3d& B, double delta);

struct DiscriminantFit {
  double a = 0.0;  // coefficient of delta^2
  double b = 0.0;  // coefficient of xi^2
  double residual = 0.0;
  std::vector<std::array<double, 3>> samples;  // (delta, xi, Delta)
};

DiscriminantFit discriminant_fit(const SmallAmplitudeFamily& fam, const std::vector<double>& deltas,
                                 const std::vector<double>& xis, const BFOptions& opt = {});

}  // namespace gkdv
