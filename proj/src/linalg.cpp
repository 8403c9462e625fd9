#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/linalg.hpp"

namespace gkdv {

EigenSystem eig(const CMatrix& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (A.cols() != n) throw Error(ErrorKind::argument, "eig needs a square matrix");
  if (!A.allFinite()) throw Error(ErrorKind::argument, "eig needs a finite matrix");
  CMatrix a = A;
  CVector w(n);
  CMatrix vl(n, n), vr(n, n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', n, a.data(), n, w.data(), vl.data(), n,
                                        vr.data(), n);
  if (info != 0)
    throw Error(ErrorKind::eigensolver, "zgeev failed with info = " + std::to_string(info) + " (n = " +
                                            std::to_string(n) + ")");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w[i].imag() < w[j].imag(); });

  EigenSystem es;
  es.values.resize(n);
  es.right.resize(n, n);
  es.left.resize(n, n);
  for (lapack_int c = 0; c < n; ++c) {
    const int i = order[c];
    es.values[c] = w[i];
    CVector r = vr.col(i);
    r /= r.norm();
    CVector l = vl.col(i);
    const cplx s = l.dot(r);  // l^H r
    if (std::abs(s) > 0.0) l /= std::conj(s);
    es.right.col(c) = r;
    es.left.col(c) = l;
  }
  return es;
}

InvariantSubspace invariant_subspace(const CMatrix& A, cplx center, double radius) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (A.cols() != n) throw Error(ErrorKind::argument, "invariant_subspace needs a square matrix");
  CMatrix T = A;
  CMatrix Q(n, n);
  CVector w(n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, T.data(), n, &sdim, w.data(),
                                  Q.data(), n);
  if (info != 0) throw Error(ErrorKind::eigensolver, "zgees failed with info = " + std::to_string(info));

  std::vector<lapack_logical> select(n);
  InvariantSubspace out;
  out.nearest_outside = std::numeric_limits<double>::infinity();
  for (lapack_int i = 0; i < n; ++i) {
    const double d = std::abs(w[i] - center);
    select[i] = d < radius;
    if (select[i])
      ++out.dim;
    else
      out.nearest_outside = std::min(out.nearest_outside, d);
  }
  const int m = out.dim;
  if (m == 0 || m == n) {
    out.basis = m ? Q : CMatrix(n, 0);
    out.dual = out.basis;
    out.T11 = m ? T : CMatrix(0, 0);
    out.projector = m ? CMatrix(CMatrix::Identity(n, n)) : CMatrix(CMatrix::Zero(n, n));
    out.inside = m ? w : CVector(0);
    return out;
  }

  lapack_int mm = 0;
  double s = 0.0, sep = 0.0;
  info = LAPACKE_ztrsen(LAPACK_COL_MAJOR, 'N', 'V', select.data(), n, T.data(), n, Q.data(), n, w.data(), &mm,
                        &s, &sep);
  if (info != 0) throw Error(ErrorKind::eigensolver, "ztrsen failed with info = " + std::to_string(info));

  // Block-diagonalize: T11 Y - Y T22 = -T12, then Pi = Q [[I, -Y], [0, 0]] Q^H.
  CMatrix T11 = T.topLeftCorner(m, m);
  CMatrix T22 = T.bottomRightCorner(n - m, n - m);
  CMatrix Y = -T.topRightCorner(m, n - m);
  double scale = 1.0;
  info = LAPACKE_ztrsyl(LAPACK_COL_MAJOR, 'N', 'N', -1, m, n - m, T11.data(), m, T22.data(), n - m, Y.data(), m,
                        &scale);
  if (info < 0) throw Error(ErrorKind::eigensolver, "ztrsyl failed with info = " + std::to_string(info));
  Y /= scale;

  CMatrix top(m, n);
  top << CMatrix::Identity(m, m), -Y;
  out.basis = Q.leftCols(m);
  out.projector = out.basis * top * Q.adjoint();
  CMatrix dual_coords(n, m);
  dual_coords << CMatrix::Identity(m, m), -Y.adjoint();
  out.dual = Q * dual_coords;
  out.T11 = T11;
  out.inside = T11.diagonal();
  return out;
}

CMatrix contour_projector(const CMatrix& A, cplx center, double radius, int nodes) {
  const Eigen::Index n = A.rows();
  CMatrix P = CMatrix::Zero(n, n);
  const CMatrix I = CMatrix::Identity(n, n);
  for (int q = 0; q < nodes; ++q) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * (q + 0.5) / nodes);
    const cplx z = center + radius * e;
    // dz = i (z - center) dtheta; the 1/(2 pi i) and dtheta = 2 pi / nodes combine.
    P += (radius * e / static_cast<double>(nodes)) * (z * I - A).partialPivLu().inverse();
  }
  return P;
}

CMatrix matrix_exp(const CMatrix& A) { return A.exp(); }

}  // namespace gkdv
