#include "gkdv/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/parallel.hpp"

namespace gkdv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Limit at 0 of g(s) = g0 + a s^2 + ..., from samples at h and 2h.
double richardson_even(double at_h, double at_2h) { return (4.0 * at_h - at_2h) / 3.0; }

CMatrix columns(const std::array<CVector, 3>& v) {
  CMatrix m(v[0].size(), 3);
  for (int j = 0; j < 3; ++j) m.col(j) = v[j];
  return m;
}

// Dual of `basis` inside span(W): Q~ = W (W^H Q)^{-H}, so Q~^H Q = I.
CMatrix biorthogonal_dual(const CMatrix& W, const CMatrix& Q) {
  const CMatrix G = W.adjoint() * Q;
  return W * G.inverse().adjoint();
}

}  // namespace

WaveProfile SmallAmplitudeFamily::profile(double delta) const {
  return signed_small_amplitude_wave(f, u0_guess, c, lambda, delta, M, profile_options);
}

HillOperator SmallAmplitudeFamily::hill(double delta) const { return HillOperator(profile(delta), f, N); }

double SmallAmplitudeFamily::u0() const { return critical_point(f, c, lambda, u0_guess); }

double SmallAmplitudeFamily::k0() const { return std::sqrt(f.eval(u0(), 1) - c) / (2.0 * pi); }

double SmallAmplitudeFamily::delta_step(double delta) const { return 1e-2 * std::max(std::abs(delta), 0.05); }

OriginProjector origin_projector(const BlochSymbol& symbol, double radius) {
  const CMatrix& L = symbol.matrix;
  if (radius <= 0.0) {
    const CVector ev = L.eigenvalues();
    std::vector<double> mod(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) mod[i] = std::abs(ev[i]);
    std::sort(mod.begin(), mod.end());
    if (mod.size() < 4) throw Error(ErrorKind::radius, "symbol too small for a rank-3 origin projector");
    radius = 0.5 * mod[3];
  }
  OriginProjector out;
  out.radius = radius;
  out.subspace = invariant_subspace(L, 0.0, radius);
  if (out.subspace.dim != 3)
    throw Error(ErrorKind::radius, "origin circle of radius " + std::to_string(radius) + " encloses " +
                                       std::to_string(out.subspace.dim) + " eigenvalues, expected 3 (xi = " +
                                       std::to_string(symbol.xi) + ")");
  out.projector = out.subspace.projector;
  out.idempotency_residual = (out.projector * out.projector - out.projector).norm();
  return out;
}

CVector mode_vector(const std::vector<double>& samples, int N) {
  const int M = static_cast<int>(samples.size());
  if (M < 2 * N + 1) throw Error(ErrorKind::aliasing, "too few samples for the requested modes");
  const auto c = fourier_coefficients(samples);
  CVector v(2 * N + 1);
  for (int n = -N; n <= N; ++n) v[n + N] = c[((n % M) + M) % M];
  return v;
}

OriginBasis basis_at_origin(const SmallAmplitudeFamily& fam, double delta) {
  const int N = fam.N;
  const int M = fam.M;
  const double hc = fam.fd_step * std::max(1.0, std::abs(fam.c));
  const double hl = fam.fd_step * std::max(1.0, std::abs(fam.lambda));
  const double hd = fam.delta_step(delta);
  const auto& f = fam.f;
  auto wave = [&](double c, double l, double d) {
    return signed_small_amplitude_wave(f, fam.u0_guess, c, l, d, M, fam.profile_options);
  };
  auto k_at = [&](double c, double l, double d) {
    return small_amplitude_wavenumber(f, fam.u0_guess, c, l, std::abs(d), fam.profile_options);
  };
  auto u0_at = [&](double c, double l) { return critical_point(f, c, l, fam.u0_guess); };

  const WaveProfile w = wave(fam.c, fam.lambda, delta);
  const double k = w.k;
  std::vector<double> dv_dc(M), dv_dl(M), dv_dd(M);
  {
    const auto a = wave(fam.c + hc, fam.lambda, delta).samples, b = wave(fam.c - hc, fam.lambda, delta).samples;
    for (int m = 0; m < M; ++m) dv_dc[m] = (a[m] - b[m]) / (2.0 * hc);
  }
  {
    const auto a = wave(fam.c, fam.lambda + hl, delta).samples, b = wave(fam.c, fam.lambda - hl, delta).samples;
    for (int m = 0; m < M; ++m) dv_dl[m] = (a[m] - b[m]) / (2.0 * hl);
  }
  const auto p2 = wave(fam.c, fam.lambda, delta + 2 * hd).samples;
  const auto p1 = wave(fam.c, fam.lambda, delta + hd).samples;
  const auto m1 = wave(fam.c, fam.lambda, delta - hd).samples;
  const auto m2 = wave(fam.c, fam.lambda, delta - 2 * hd).samples;
  for (int m = 0; m < M; ++m) dv_dd[m] = (-p2[m] + 8.0 * p1[m] - 8.0 * m1[m] + m2[m]) / (12.0 * hd);

  const double du0_dc = (u0_at(fam.c + hc, fam.lambda) - u0_at(fam.c - hc, fam.lambda)) / (2.0 * hc);
  const double du0_dl = (u0_at(fam.c, fam.lambda + hl) - u0_at(fam.c, fam.lambda - hl)) / (2.0 * hl);
  const double dk_dc = (k_at(fam.c + hc, fam.lambda, delta) - k_at(fam.c - hc, fam.lambda, delta)) / (2.0 * hc);
  const double dk_dl = (k_at(fam.c, fam.lambda + hl, delta) - k_at(fam.c, fam.lambda - hl, delta)) / (2.0 * hl);
  const double kp2 = k_at(fam.c, fam.lambda, delta + 2 * hd), kp1 = k_at(fam.c, fam.lambda, delta + hd);
  const double km1 = k_at(fam.c, fam.lambda, delta - hd), km2 = k_at(fam.c, fam.lambda, delta - 2 * hd);
  const double dk_dd = (-kp2 + 8.0 * kp1 - 8.0 * km1 + km2) / (12.0 * hd);

  OriginBasis B;
  B.delta = delta;
  B.wronskian_denominator = du0_dl * dk_dc - du0_dc * dk_dl;
  if (std::abs(B.wronskian_denominator) < 1e-10)
    throw Error(ErrorKind::degenerate_parameterization,
                "Wronskian denominator " + std::to_string(B.wronskian_denominator) + " is below 1e-10");
  const double den = B.wronskian_denominator;

  if (delta != 0.0) {
    auto dv = spectral_derivative(w.samples, 1);
    for (auto& x : dv) x /= -2.0 * pi * delta;
    B.q[0] = mode_vector(dv, N);
  } else {
    B.q[0] = CVector::Zero(2 * N + 1);
    B.q[0][N + 1] = -0.5 * I;
    B.q[0][N - 1] = 0.5 * I;
  }
  std::vector<double> q2(M), q3(M);
  for (int m = 0; m < M; ++m) {
    q2[m] = dv_dd[m] - dk_dd * (du0_dl * dv_dc[m] - du0_dc * dv_dl[m]) / den;
    q3[m] = (dk_dc * dv_dl[m] - dk_dl * dv_dc[m]) / den;
  }
  B.q[1] = mode_vector(q2, N);
  B.q[2] = mode_vector(q3, N);

  const double dk_over_delta =
      delta != 0.0 ? dk_dd / delta : (k_at(fam.c, fam.lambda, hd) - k) * 2.0 / (hd * hd);
  B.E12 = -2.0 * pi * k * du0_dl / den * dk_over_delta;
  B.E13 = -2.0 * pi * k * dk_dl / den;

  const HillOperator op(w, f, N);
  const OriginProjector P = origin_projector(op.at(0.0));
  B.radius = P.radius;
  for (auto& q : B.q) {
    const CVector pq = P.projector * q;
    B.range_residual = std::max(B.range_residual, (q - pq).norm() / q.norm());
    q = pq;
  }
  const CMatrix Q = columns(B.q);
  const CMatrix Qd = biorthogonal_dual(P.subspace.dual, Q);
  for (int j = 0; j < 3; ++j) B.dual[j] = Qd.col(j);
  B.biorthogonality_residual = (Qd.adjoint() * Q - CMatrix::Identity(3, 3)).norm();
  return B;
}

std::vector<TransportedBasis> kato_transport(const HillOperator& op, const OriginBasis& basis,
                                             const std::vector<double>& xi_targets, const TransportOptions& opt) {
  for (double x : xi_targets)
    if (std::abs(x) > opt.xi_max + 1e-15)
      throw Error(ErrorKind::argument, "transport target " + std::to_string(x) + " beyond xi_max");
  const double radius = basis.radius;
  auto subspace = [&](double xi) {
    auto s = invariant_subspace(op.at(xi).matrix, 0.0, radius);
    if (s.dim != 3)
      throw Error(ErrorKind::transport, "projector rank changed to " + std::to_string(s.dim) + " at xi = " +
                                            std::to_string(xi));
    return s;
  };
  std::map<double, CMatrix> cache;
  auto proj = [&](double xi) -> const CMatrix& {
    auto it = cache.find(xi);
    if (it == cache.end()) it = cache.emplace(xi, subspace(xi).projector).first;
    return it->second;
  };
  const double eps = opt.diff_step;
  auto rhs = [&](double xi, const CMatrix& Q) -> CMatrix {
    const CMatrix& Pi = proj(xi);
    const CMatrix dPi = (proj(xi + eps) - proj(xi - eps)) / (2.0 * eps);
    if (dPi.norm() * opt.step > 0.5)
      throw Error(ErrorKind::transport, "projector varies too fast near xi = " + std::to_string(xi));
    return dPi * (Pi * Q) - Pi * (dPi * Q);
  };

  const CMatrix Q0 = columns(basis.q);
  std::vector<TransportedBasis> out(xi_targets.size());
  auto finish = [&](std::size_t idx, double xi, const CMatrix& Q) {
    TransportedBasis& t = out[idx];
    t.xi = xi;
    const auto s = subspace(xi);
    const CMatrix Qd = biorthogonal_dual(s.dual, Q);
    for (int j = 0; j < 3; ++j) {
      t.q[j] = Q.col(j);
      t.dual[j] = Qd.col(j);
      t.range_residual =
          std::max(t.range_residual, (Q.col(j) - s.projector * Q.col(j)).norm() / Q.col(j).norm());
    }
  };

  for (const double sign : {1.0, -1.0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xi_targets.size(); ++i)
      if (sign > 0 ? xi_targets[i] >= 0.0 : xi_targets[i] < 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(xi_targets[a]) < std::abs(xi_targets[b]); });
    CMatrix Q = Q0;
    double xi = 0.0;
    for (std::size_t i : idx) {
      const double target = xi_targets[i];
      const int steps = static_cast<int>(std::ceil(std::abs(target - xi) / opt.step - 1e-9));
      if (steps > 0) {
        const double h = (target - xi) / steps;
        for (int s = 0; s < steps; ++s) {
          const double x0 = xi + s * h;
          const CMatrix k1 = rhs(x0, Q);
          const CMatrix k2 = rhs(x0 + 0.5 * h, Q + 0.5 * h * k1);
          const CMatrix k3 = rhs(x0 + 0.5 * h, Q + 0.5 * h * k2);
          const CMatrix k4 = rhs(x0 + h, Q + h * k3);
          Q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          // Keep the cache bounded to the current neighbourhood.
          for (auto it = cache.begin(); it != cache.end();)
            it = std::abs(it->first - (x0 + h)) > 2.0 * eps + 1e-15 ? cache.erase(it) : std::next(it);
        }
        xi = target;
      }
      if (steps == 0 && target == 0.0) {
        TransportedBasis& t = out[i];
        t.xi = 0.0;
        t.q = basis.q;
        t.dual = basis.dual;
        t.range_residual = 0.0;
        continue;
      }
      finish(i, target, Q);
    }
  }
  return out;
}

double structure_residual(const Matrix3c& D) {
  double r = 0.0;
  for (auto [j, l] : {std::pair{0, 0}, {1, 1}, {2, 2}, {1, 2}, {2, 1}}) r = std::max(r, std::abs(D(j, l).real()));
  for (auto [j, l] : {std::pair{0, 1}, {0, 2}, {1, 0}, {2, 0}}) r = std::max(r, std::abs(D(j, l).imag()));
  return r;
}

namespace {

Matrix3c blow_up(const Matrix3c& D, double xi) {
  const cplx p[3] = {I * xi, 1.0, 1.0};
  Matrix3c T;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) T(j, l) = p[j] * D(j, l) / p[l] / (I * xi);
  return T;
}

Matrix3d coefficients_from_tilde(const Matrix3c& Dt, double delta) {
  Matrix3d B = Dt.real();
  for (auto [j, l] : {std::pair{0, 2}, {1, 2}, {2, 0}, {2, 1}}) B(j, l) = delta != 0.0 ? B(j, l) / delta : nan;
  return B;
}

Matrix3c reduced_D(const HillOperator& op, const std::array<CVector, 3>& q, const std::array<CVector, 3>& dual,
                   double xi) {
  const CMatrix L = op.at(xi).matrix;
  Matrix3c D;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) D(j, l) = dual[j].dot(L * q[l]);
  return D;
}

}  // namespace

ReducedMatrix reduced_matrix(const SmallAmplitudeFamily& fam, const OriginBasis& basis, double xi,
                             const TransportOptions& opt) {
  const HillOperator op = fam.hill(basis.delta);
  ReducedMatrix R;
  R.xi = xi;
  R.delta = basis.delta;
  if (xi == 0.0) {
    R.D = reduced_D(op, basis.q, basis.dual, 0.0);
    const double h = 1e-2;
    const auto tb = kato_transport(op, basis, {h, h / 2, h / 4}, opt);
    Matrix3c Dt[3];
    for (int i = 0; i < 3; ++i) Dt[i] = blow_up(reduced_D(op, tb[i].q, tb[i].dual, tb[i].xi), tb[i].xi);
    // Neville weights at 0 for nodes h, h/2, h/4.
    const Matrix3c r3 = Dt[0] / 3.0 - 2.0 * Dt[1] + (8.0 / 3.0) * Dt[2];
    const Matrix3c r2 = 2.0 * Dt[2] - Dt[1];
    R.Dtilde = r3;
    R.tilde_error = (r3 - r2).cwiseAbs().maxCoeff();
  } else {
    const auto tb = kato_transport(op, basis, {xi}, opt);
    R.D = reduced_D(op, tb[0].q, tb[0].dual, xi);
    R.Dtilde = blow_up(R.D, xi);
  }
  R.has_tilde = true;
  R.B = coefficients_from_tilde(R.Dtilde, basis.delta);
  R.structure_residual = structure_residual(R.D);
  return R;
}

ReducedMatrix reduced_matrix(const SmallAmplitudeFamily& fam, double delta, double xi, const TransportOptions& opt) {
  return reduced_matrix(fam, basis_at_origin(fam, delta), xi, opt);
}

Triangularization triangularize(const Matrix3d& B, double delta) {
  const double d2 = delta * delta;
  Eigen::Matrix2d A;
  A << B(0, 0) - B(2, 2), B(0, 1), B(1, 0), B(1, 1) - B(2, 2);
  const Eigen::Matrix2d Ainv = A.inverse();
  auto at = [&](int j, int l) { return std::isfinite(B(j, l)) ? B(j, l) : 0.0; };
  Eigen::RowVector2d alpha(at(2, 0), at(2, 1));
  alpha = alpha * Ainv;
  for (int it = 0; it < 200; ++it) {
    const double s = alpha(0) * at(0, 2) + alpha(1) * at(1, 2);
    Eigen::RowVector2d rhs(at(2, 0) - d2 * alpha(0) * s, at(2, 1) - d2 * alpha(1) * s);
    const Eigen::RowVector2d next = rhs * Ainv;
    const double change = (next - alpha).norm();
    alpha = next;
    if (change <= 1e-15 * (1.0 + alpha.norm())) break;
  }
  Triangularization t;
  t.alpha1 = alpha(0);
  t.alpha2 = alpha(1);
  const double s = t.alpha1 * at(0, 2) + t.alpha2 * at(1, 2);
  const double diff = B(0, 0) - B(1, 1) + d2 * (t.alpha1 * at(0, 2) - t.alpha2 * at(1, 2));
  t.discriminant = 0.25 * diff * diff + (B(0, 1) + d2 * t.alpha2 * at(0, 2)) * (B(1, 0) + d2 * t.alpha1 * at(1, 2));
  const double mean = 0.5 * (B(0, 0) + B(1, 1) + d2 * s);
  const cplx root = std::sqrt(cplx(t.discriminant, 0.0));
  t.split = {mean + root, mean - root, B(2, 2) - d2 * s};
  return t;
}

BFDecomposition bf_decomposition(const SmallAmplitudeFamily& fam, double delta, double xi, const BFOptions& opt) {
  const double h = opt.h_xi, hd = opt.h_delta;
  BFDecomposition out;
  out.k0 = fam.k0();
  const double u0 = fam.u0();
  const double f1 = fam.f.eval(u0, 1), f2 = fam.f.eval(u0, 2), f3 = fam.f.eval(u0, 3);
  out.bf_index = f2 * f2 - 3.0 * f3 * (f1 - fam.c);
  out.identity_rhs = out.k0 * out.k0 * out.bf_index;

  const std::vector<double> deltas = {0.0, hd, -hd, 2.0 * hd, delta};
  const auto bases = parallel_map<OriginBasis>(
      deltas.size(), [&](std::size_t i) { return basis_at_origin(fam, deltas[i]); }, opt.threads);

  struct Point {
    int basis;
    double xi;
  };
  const std::vector<Point> pts = {
      {0, h},       {0, 2 * h},                                   // 0,1: delta = 0
      {1, 0.0},     {3, 0.0},                                     // 2,3: xi = 0
      {1, h},       {1, 2 * h},     {2, h}, {2, 2 * h},           // 4..7: +-hd
      {3, h},       {3, 2 * h},                                   // 8,9: 2hd
      {4, xi},                                                    // 10: requested point
  };
  const auto R = parallel_map<ReducedMatrix>(
      pts.size(),
      [&](std::size_t i) { return reduced_matrix(fam, bases[pts[i].basis], pts[i].xi, opt.transport); },
      opt.threads);
  for (const auto& r : R) {
    out.max_structure_residual = std::max(out.max_structure_residual, r.structure_residual);
    const double scale = r.D.cwiseAbs().maxCoeff();
    if (r.structure_residual > opt.struct_tol * scale)
      throw Error(ErrorKind::extraction, "structure residual " + std::to_string(r.structure_residual) +
                                             " exceeds struct_tol at (xi, delta) = (" + std::to_string(r.xi) + ", " +
                                             std::to_string(r.delta) + ")");
  }

  auto Bv = [&](int i, int j, int l) { return R[i].B(j, l); };
  out.B21 = richardson_even(Bv(0, 1, 0), Bv(1, 1, 0));
  out.B22_minus_B33 = richardson_even(Bv(0, 1, 1) - Bv(0, 2, 2), Bv(1, 1, 1) - Bv(1, 2, 2));
  const double B11 = richardson_even(Bv(0, 0, 0), Bv(1, 0, 0));
  const double B22 = richardson_even(Bv(0, 1, 1), Bv(1, 1, 1));
  const double B33 = richardson_even(Bv(0, 2, 2), Bv(1, 2, 2));
  out.d2B12_dxi2 = richardson_even(2.0 * Bv(0, 0, 1) / (h * h), 2.0 * Bv(1, 0, 1) / (4.0 * h * h));
  out.B13 = richardson_even(Bv(2, 0, 2), Bv(3, 0, 2));
  out.d2B12_ddelta2 = richardson_even(2.0 * Bv(2, 0, 1) / (hd * hd), 2.0 * Bv(3, 0, 1) / (4.0 * hd * hd));
  auto both = [&](int j, int l) {
    return richardson_even(richardson_even(Bv(4, j, l), Bv(8, j, l)), richardson_even(Bv(5, j, l), Bv(9, j, l)));
  };
  out.B32 = both(2, 1);
  const double B31 = both(2, 0);
  auto ddelta = [&](int j, int l, int at_h, int at_mh) { return (Bv(at_h, j, l) - Bv(at_mh, j, l)) / (2.0 * hd); };
  out.dB11_ddelta = richardson_even(ddelta(0, 0, 4, 6), ddelta(0, 0, 5, 7));
  out.dB22_ddelta = richardson_even(ddelta(1, 1, 4, 6), ddelta(1, 1, 5, 7));

  Eigen::Matrix2d A;
  A << B11 - B33, 0.0, out.B21, B22 - B33;
  const Eigen::RowVector2d alpha = Eigen::RowVector2d(B31, out.B32) * A.inverse();
  out.alpha1 = alpha(0);
  out.alpha2 = alpha(1);

  auto identity = [](double d11, double d22, double b21, double d2b12, double a2, double b13) {
    const double t = d11 - d22;
    return t * t + 2.0 * b21 * (d2b12 + 2.0 * a2 * b13);
  };
  out.identity_lhs =
      identity(out.dB11_ddelta, out.dB22_ddelta, out.B21, out.d2B12_ddelta2, out.alpha2, out.B13);
  // Same quantity from the finest unextrapolated samples; the gap estimates
  // the remaining discretization error.
  const double raw_a2 = Bv(4, 2, 1) / (Bv(0, 1, 1) - Bv(0, 2, 2));
  const double raw = identity(ddelta(0, 0, 4, 6), ddelta(1, 1, 4, 6), Bv(0, 1, 0), 2.0 * Bv(2, 0, 1) / (hd * hd),
                              raw_a2, Bv(2, 0, 2));
  out.identity_error_estimate = std::abs(out.identity_lhs - raw);
  out.b_coefficient = 0.5 * out.B21 * out.d2B12_dxi2;

  out.xi = xi;
  out.delta = delta;
  const ReducedMatrix& Rq = R.back();
  const Triangularization t = triangularize(Rq.B, delta);
  out.discriminant = t.discriminant;
  out.split = t.split;
  // Independent route: eigenvalues of the blow-up matrix itself.
  const Eigen::Vector3cd ev = Rq.Dtilde.real().cast<cplx>().eval().eigenvalues();
  int third = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(ev[i] - t.split.third) < std::abs(ev[third] - t.split.third)) third = i;
  cplx pair[2];
  for (int i = 0, n = 0; i < 3; ++i)
    if (i != third) pair[n++] = ev[i];
  const cplx half = 0.5 * (pair[0] - pair[1]);
  out.discriminant_from_eigenvalues = (half * half).real();
  return out;
}

DiscriminantFit discriminant_fit(const SmallAmplitudeFamily& fam, const std::vector<double>& deltas,
                                 const std::vector<double>& xis, const BFOptions& opt) {
  const auto bases = parallel_map<OriginBasis>(
      deltas.size(), [&](std::size_t i) { return basis_at_origin(fam, deltas[i]); }, opt.threads);
  std::vector<std::pair<std::size_t, double>> pts;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    for (double x : xis) pts.emplace_back(i, x);
  const auto R = parallel_map<ReducedMatrix>(
      pts.size(), [&](std::size_t i) { return reduced_matrix(fam, bases[pts[i].first], pts[i].second, opt.transport); },
      opt.threads);
  DiscriminantFit fit;
  Eigen::MatrixXd A(pts.size(), 2);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = deltas[pts[i].first], x = pts[i].second;
    const double disc = triangularize(R[i].B, d).discriminant;
    fit.samples.push_back({d, x, disc});
    A(i, 0) = d * d;
    A(i, 1) = x * x;
    y(i) = disc;
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  fit.a = coef(0);
  fit.b = coef(1);
  fit.residual = (A * coef - y).norm() / std::max(y.norm(), 1e-300);
  return fit;
}

}  // namespace gkdv
