#pragma once

#include <Eigen/Dense>
#include <complex>

namespace gkdv {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenSystem {
  CVector values;
  CMatrix right;  // unit-norm columns
  CMatrix left;   // left(:,i)^H right(:,i) = 1
};

/// Dense nonsymmetric eigendecomposition (LAPACK zgeev), sorted by
/// imaginary part, left vectors scaled against the right ones.
EigenSystem eig(const CMatrix& A);

/// Spectral data of the invariant subspace for the eigenvalues inside the
/// disk |lambda - center| < radius, from a reordered Schur form. Works
/// through Jordan blocks, where eigenvector-based projectors break down.
struct InvariantSubspace {
  int dim = 0;
  CMatrix basis;      // n x dim, orthonormal, spans Ran(Pi)
  CMatrix dual;       // n x dim, spans Ran(Pi^H)
  CMatrix T11;        // restriction of A to Ran(Pi) in `basis`
  CMatrix projector;  // n x n
  CVector inside;     // the selected eigenvalues
  double nearest_outside = 0.0;  // distance from center to closest excluded eigenvalue
};

InvariantSubspace invariant_subspace(const CMatrix& A, cplx center, double radius);

/// Trapezoid rule for (1 / 2 pi i) \oint (z - A)^{-1} dz on a circle.
CMatrix contour_projector(const CMatrix& A, cplx center, double radius, int nodes = 64);

CMatrix matrix_exp(const CMatrix& A);

}  // namespace gkdv
