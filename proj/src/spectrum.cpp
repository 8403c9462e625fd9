#include "gkdv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "gkdv/error.hpp"
#include "gkdv/parallel.hpp"

namespace gkdv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);
constexpr double inf = std::numeric_limits<double>::infinity();

cplx extrapolate(const std::vector<cplx>& h) {
  const std::size_t n = h.size();
  if (n >= 3) return 3.0 * h[n - 1] - 3.0 * h[n - 2] + h[n - 3];
  if (n == 2) return 2.0 * h[n - 1] - h[n - 2];
  return h.back();
}

// Labels by dominant Fourier mode, each mode used once.
std::vector<int> dominant_labels(const EigenSystem& es, int N) {
  const int n = static_cast<int>(es.values.size());
  std::vector<std::tuple<double, int, int>> cand;  // (-|coef|, eigen index, mode row)
  cand.reserve(static_cast<std::size_t>(n) * n);
  for (int e = 0; e < n; ++e)
    for (int r = 0; r < n; ++r) cand.emplace_back(-std::abs(es.right(r, e)), e, r);
  std::sort(cand.begin(), cand.end());
  std::vector<int> label(n, std::numeric_limits<int>::min());
  std::vector<bool> used(n, false);
  int assigned = 0;
  for (const auto& [neg, e, r] : cand) {
    if (assigned == n) break;
    if (label[e] != std::numeric_limits<int>::min() || used[r]) continue;
    label[e] = r - N;
    used[r] = true;
    ++assigned;
  }
  return label;
}

}  // namespace

EigenSystem eigs(const BlochSymbol& symbol) {
  try {
    return eig(symbol.matrix);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " [symbol xi = " + std::to_string(symbol.xi) +
                              ", N = " + std::to_string(symbol.N) + "]");
  }
}

double trusted_radius(double k, int N) { return std::pow(k * pi * N / 2.0, 3); }

std::vector<double> floquet_grid(int n) {
  if (n < 1) throw Error(ErrorKind::argument, "Floquet grid needs at least one point");
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) xi[i] = -pi + 2.0 * pi * (i + 1) / n;
  xi.back() = pi;
  return xi;
}

CurveSet track_curves(const HillOperator& op, const std::vector<double>& xi_grid, const TrackingOptions& opt) {
  if (xi_grid.size() < 64) throw Error(ErrorKind::argument, "curve tracking needs at least 64 Floquet exponents");
  const double step = xi_grid[1] - xi_grid[0];
  for (std::size_t i = 1; i < xi_grid.size(); ++i)
    if (std::abs(xi_grid[i] - xi_grid[i - 1] - step) > 1e-9 * std::abs(step) || step <= 0.0)
      throw Error(ErrorKind::argument, "curve tracking needs a uniform increasing Floquet grid");

  std::vector<double> pts;
  pts.push_back(-pi);
  for (double x : xi_grid)
    if (x > -pi + 1e-12) pts.push_back(x);

  const int N = op.N();
  const int n = 2 * N + 1;
  const double k3 = std::pow(op.k(), 3);
  auto systems = parallel_map<EigenSystem>(pts.size(), [&](std::size_t i) { return eigs(op.at(pts[i])); },
                                           opt.threads);

  CurveSet out;
  out.N = N;
  out.k = op.k();
  out.window_radius = opt.window_radius > 0.0 ? opt.window_radius : trusted_radius(op.k(), N);

  std::vector<int> labels = dominant_labels(systems[0], N);
  std::vector<SpectralCurve> all(n);
  std::vector<int> current(n);
  std::iota(current.begin(), current.end(), 0);
  std::vector<CVector> last_vec(n);
  for (int e = 0; e < n; ++e) {
    all[e].label = labels[e];
    all[e].xi.push_back(pts[0]);
    all[e].lambdas.push_back(systems[0].values[e]);
    last_vec[e] = systems[0].right.col(e);
    if (opt.keep_vectors) {
      all[e].eigvecs.push_back(systems[0].right.col(e));
      all[e].left_eigvecs.push_back(systems[0].left.col(e));
    }
  }

  std::vector<std::tuple<double, int, int>> pairs;
  for (std::size_t s = 1; s < pts.size(); ++s) {
    const EigenSystem& es = systems[s];
    std::vector<cplx> pred(n);
    for (int c = 0; c < n; ++c) pred[c] = extrapolate(all[c].lambdas);
    pairs.clear();
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) pairs.emplace_back(std::abs(es.values[e] - pred[c]), c, e);
    std::sort(pairs.begin(), pairs.end());

    std::vector<int> match(n, -1);
    std::vector<bool> taken(n, false);
    for (const auto& [d, c, e0] : pairs) {
      if (match[c] >= 0 || taken[e0]) continue;
      // Near-ties in value are broken by eigenvector overlap.
      const double tie = opt.match_tol * (std::abs(pred[c]) + k3);
      int best = e0;
      double best_ov = std::abs(last_vec[c].dot(es.right.col(e0)));
      double second_ov = -1.0;
      for (int e = 0; e < n; ++e) {
        if (e == e0 || taken[e]) continue;
        if (std::abs(es.values[e] - pred[c]) > d + tie) continue;
        const double ov = std::abs(last_vec[c].dot(es.right.col(e)));
        if (ov > best_ov) {
          second_ov = best_ov;
          best_ov = ov;
          best = e;
        } else {
          second_ov = std::max(second_ov, ov);
        }
      }
      if (second_ov >= 0.0 && best_ov - second_ov <= opt.match_tol) ++out.collisions;
      match[c] = best;
      taken[best] = true;
    }

    for (int c = 0; c < n; ++c) {
      const int e = match[c];
      CVector r = es.right.col(e);
      CVector l = es.left.col(e);
      const cplx ov = last_vec[c].dot(r);
      if (std::abs(ov) > 0.0) {
        const cplx phase = std::conj(ov) / std::abs(ov);
        r *= phase;
        l *= phase;
      }
      current[c] = e;
      all[c].xi.push_back(pts[s]);
      all[c].lambdas.push_back(es.values[e]);
      last_vec[c] = r;
      if (opt.keep_vectors) {
        all[c].eigvecs.push_back(std::move(r));
        all[c].left_eigvecs.push_back(std::move(l));
      }
    }
  }

  // Gluing across the zone boundary: the branch whose dominant mode at pi is
  // j continues as the branch labelled j + 1 at -pi. Branches through the
  // origin exchange their dominant modes, so end labels are recomputed.
  const bool ends_at_pi = std::abs(pts.back() - pi) < 1e-12;
  if (ends_at_pi) {
    const std::vector<int> end_labels = dominant_labels(systems.back(), N);
    for (int c = 0; c < n; ++c) all[c].end_label = end_labels[current[c]];
    for (const auto& a : all) {
      for (const auto& b : all) {
        if (b.label != a.end_label + 1) continue;
        if (std::abs(a.lambdas.back()) > out.window_radius || std::abs(b.lambdas.front()) > out.window_radius)
          continue;
        out.gluing_residual = std::max(out.gluing_residual, std::abs(a.lambdas.back() - b.lambdas.front()));
      }
    }
  }

  const bool drop_anchor = !(xi_grid.front() <= -pi + 1e-12);
  for (auto& c : all) {
    if (drop_anchor) {
      c.xi.erase(c.xi.begin());
      c.lambdas.erase(c.lambdas.begin());
      if (opt.keep_vectors) {
        c.eigvecs.erase(c.eigvecs.begin());
        c.left_eigvecs.erase(c.left_eigvecs.begin());
      }
    }
    const bool inside = std::any_of(c.lambdas.begin(), c.lambdas.end(),
                                    [&](cplx z) { return std::abs(z) <= out.window_radius; });
    if (inside) out.curves.push_back(std::move(c));
  }
  std::sort(out.curves.begin(), out.curves.end(),
            [](const SpectralCurve& a, const SpectralCurve& b) { return a.label < b.label; });
  return out;
}

CurveSet track_curves(const WaveProfile& profile, const Nonlinearity& f, const std::vector<double>& xi_grid, int N,
                      const TrackingOptions& opt) {
  return track_curves(HillOperator(profile, f, N), xi_grid, opt);
}

OriginStencil origin_stencil(const HillOperator& op, double h, double r0) {
  if (!(h > 0.0) || 3.0 * h > pi) throw Error(ErrorKind::argument, "origin stencil step must be in (0, pi/3]");
  OriginStencil o;
  o.h = h;
  o.r0 = r0;
  auto smallest3 = [](const CVector& v) {
    std::vector<cplx> z(v.data(), v.data() + v.size());
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    z.resize(3);
    return z;
  };
  const auto es0 = eigs(op.at(0.0));
  for (Eigen::Index i = 0; i < es0.values.size(); ++i)
    if (std::abs(es0.values[i]) <= r0) ++o.multiplicity;
  for (cplx z : smallest3(es0.values)) o.origin_spread = std::max(o.origin_spread, std::abs(z));

  const double k3 = std::pow(op.k(), 3);
  std::array<std::array<cplx, 3>, 3> mu{};
  for (int s = 0; s < 3; ++s) {
    const double xi = (s + 1) * h;
    auto z = smallest3(eigs(op.at(xi)).values);
    std::array<cplx, 3> m;
    for (int b = 0; b < 3; ++b) m[b] = z[b] / (I * xi);
    // Conjugate pairs share the real part exactly; compare it with a tolerance.
    std::sort(m.begin(), m.end(), [&](cplx a, cplx b) {
      if (std::abs(a.real() - b.real()) > 1e-9 * (std::abs(a) + std::abs(b) + k3)) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    for (int b = 0; b < 3; ++b) {
      mu[b][s] = m[b];
      o.samples[b][s] = I * xi * m[b];
      o.max_real_part = std::max(o.max_real_part, std::abs(o.samples[b][s].real()));
    }
  }
  for (int b = 0; b < 3; ++b) {
    o.slopes[b] = I * (3.0 * mu[b][0] - 3.0 * mu[b][1] + mu[b][2]);
    o.third_derivatives[b] = 3.0 * I * (mu[b][0] - 2.0 * mu[b][1] + mu[b][2]) / (h * h);
  }
  return o;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::dispersively_stable: return "dispersively_stable";
    case Verdict::spectrally_unstable: return "spectrally_unstable";
    case Verdict::degenerate: return "degenerate";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

StabilityTolerances StabilityTolerances::resolved(double k, double delta) const {
  const double k3 = k * k * k;
  StabilityTolerances t = *this;
  if (t.tol_re <= 0.0) t.tol_re = 1e-6 * k3;
  if (t.r0 <= 0.0) t.r0 = 1e-4 * k3;
  if (t.slope_tol <= 0.0) t.slope_tol = 1e-3 * k3;
  if (t.curv_tol <= 0.0) t.curv_tol = 1e-3 * k3;
  if (t.gap_tol <= 0.0) t.gap_tol = 1e-6 * k3;
  if (t.origin_step <= 0.0) t.origin_step = 0.1 * std::max(std::abs(delta), 0.02);
  return t;
}

StabilityReport stability_report(const CurveSet& cs, const OriginStencil& origin, const StabilityTolerances& tol) {
  StabilityReport rep;
  rep.k = cs.k;
  rep.N = cs.N;
  rep.tolerances = tol;
  rep.origin = origin;
  rep.curve_collisions = cs.collisions;
  rep.gluing_residual = cs.gluing_residual;
  rep.curve_count = static_cast<int>(cs.curves.size());
  const double W = cs.window_radius;

  // The three smallest eigenvalues at xi = 0 are the origin cluster; they are
  // judged by the multiplicity condition, not by their (rounding-level) real parts.
  std::vector<std::pair<int, int>> origin_samples;  // (curve, sample)
  if (!cs.curves.empty()) {
    std::vector<std::tuple<double, int, int>> at_zero;
    for (int c = 0; c < rep.curve_count; ++c)
      for (std::size_t s = 0; s < cs.curves[c].xi.size(); ++s)
        if (std::abs(cs.curves[c].xi[s]) < 1e-14)
          at_zero.emplace_back(std::abs(cs.curves[c].lambdas[s]), c, static_cast<int>(s));
    std::sort(at_zero.begin(), at_zero.end());
    for (std::size_t i = 0; i < std::min<std::size_t>(3, at_zero.size()); ++i)
      origin_samples.emplace_back(std::get<1>(at_zero[i]), std::get<2>(at_zero[i]));
  }
  auto is_origin = [&](int c, int s) {
    return std::find(origin_samples.begin(), origin_samples.end(), std::make_pair(c, s)) != origin_samples.end();
  };

  rep.max_real_part = origin.max_real_part;
  rep.min_nonzero_curvature = inf;
  rep.min_gap = inf;
  for (int c = 0; c < rep.curve_count; ++c) {
    const auto& cv = cs.curves[c];
    const int n = static_cast<int>(cv.lambdas.size());
    for (int s = 0; s < n; ++s) {
      const cplx z = cv.lambdas[s];
      if (std::abs(z) > W || is_origin(c, s)) continue;
      rep.max_real_part = std::max(rep.max_real_part, std::abs(z.real()));
      if (s >= 2 && s + 2 < n) {
        const double dx = cv.xi[s + 1] - cv.xi[s];
        const cplx d2 = (-cv.lambdas[s - 2] + 16.0 * cv.lambdas[s - 1] - 30.0 * z + 16.0 * cv.lambdas[s + 1] -
                         cv.lambdas[s + 2]) /
                        (12.0 * dx * dx);
        rep.min_nonzero_curvature = std::min(rep.min_nonzero_curvature, std::abs(d2));
      }
      for (int c2 = 0; c2 < rep.curve_count; ++c2) {
        if (c2 == c || cs.curves[c2].lambdas.size() != cv.lambdas.size()) continue;
        rep.min_gap = std::min(rep.min_gap, std::abs(cs.curves[c2].lambdas[s] - z));
      }
    }
  }

  rep.origin_multiplicity = origin.multiplicity;
  rep.origin_slopes = origin.slopes;
  rep.origin_third_derivatives = origin.third_derivatives;
  rep.min_slope_separation = inf;
  rep.min_third_derivative = inf;
  for (int a = 0; a < 3; ++a) {
    rep.min_third_derivative = std::min(rep.min_third_derivative, std::abs(origin.third_derivatives[a]));
    for (int b = a + 1; b < 3; ++b)
      rep.min_slope_separation = std::min(rep.min_slope_separation, std::abs(origin.slopes[a] - origin.slopes[b]));
  }

  auto fail = [&](const char* what) { rep.failed_conditions.emplace_back(what); };
  if (rep.max_real_part > tol.tol_re) fail("real_part");
  if (rep.curve_count < 5) fail("too_few_curves");
  if (rep.origin_multiplicity != 3) fail("origin_multiplicity");
  if (!(rep.min_slope_separation > tol.slope_tol)) fail("slope_separation");
  if (!(rep.min_third_derivative > tol.curv_tol)) fail("third_derivative");
  if (!(rep.min_nonzero_curvature > tol.curv_tol)) fail("curvature");
  if (!(rep.min_gap > tol.gap_tol)) fail("simplicity");

  if (rep.max_real_part > tol.tol_re)
    rep.verdict = Verdict::spectrally_unstable;
  else if (rep.curve_count < 5)
    rep.verdict = Verdict::inconclusive;
  else if (!rep.failed_conditions.empty())
    rep.verdict = Verdict::degenerate;
  else
    rep.verdict = Verdict::dispersively_stable;
  return rep;
}

StabilityRun analyze_stability(const WaveProfile& profile, const Nonlinearity& f, int N, int n_xi,
                               const StabilityTolerances& tol, int threads, double match_tol) {
  HillOperator op(profile, f, N);
  TrackingOptions topt;
  topt.threads = threads;
  topt.match_tol = match_tol;
  topt.keep_vectors = false;
  StabilityRun run;
  run.curves = track_curves(op, floquet_grid(n_xi), topt);
  const StabilityTolerances t = tol.resolved(profile.k, profile.delta.value_or(0.0));
  run.report = stability_report(run.curves, origin_stencil(op, t.origin_step, t.r0), t);
  return run;
}

double hamiltonian_symmetry_residual(const CVector& ev, double window) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (window > 0.0 && std::abs(ev[i]) > window) continue;
    const cplx mirror = -std::conj(ev[i]);
    double best = inf;
    for (Eigen::Index j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev[j] - mirror));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<HighFrequencyResidual> high_frequency_residuals(const CurveSet& cs) {
  std::vector<HighFrequencyResidual> out;
  const double k3 = std::pow(cs.k, 3);
  for (const auto& c : cs.curves) {
    const int j = std::abs(c.label);
    if (j < 3 || 2 * j > cs.N) continue;
    HighFrequencyResidual r;
    r.label = c.label;
    for (std::size_t s = 0; s < c.xi.size(); ++s) {
      const double zeta = 2.0 * pi * c.label + c.xi[s];
      r.residual_per_mode = std::max(r.residual_per_mode, std::abs(c.lambdas[s] - I * k3 * zeta * zeta * zeta) / j);
    }
    out.push_back(r);
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::argument, "slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

EigenfunctionAsymptotics eigenfunction_asymptotics(const HillOperator& op, int j_min, int j_max, double xi) {
  const int N = op.N();
  if (j_min < 1 || j_max < j_min || 2 * j_max > N)
    throw Error(ErrorKind::argument, "mode range must satisfy 1 <= j_min <= j_max <= N/2");
  const auto es = eigs(op.at(xi));
  EigenfunctionAsymptotics out;
  for (int j = j_min; j <= j_max; ++j) {
    const int row = j + N;
    Eigen::Index best = 0;
    es.right.row(row).cwiseAbs().maxCoeff(&best);
    CVector r = es.right.col(best) / es.right(row, best);
    CVector l = es.left.col(best) / es.left(row, best);
    CVector d = r;
    d[row] -= 1.0;
    out.modes.push_back(j);
    out.deviation.push_back(d.norm());
    out.dual_mismatch.push_back((r - l).norm());
  }
  out.conclusive = out.modes.size() >= 4;
  if (out.conclusive) {
    std::vector<double> x(out.modes.begin(), out.modes.end());
    const bool exact = std::all_of(out.deviation.begin(), out.deviation.end(), [](double v) { return v == 0.0; });
    if (!exact) {
      out.deviation_slope = loglog_slope(x, out.deviation);
      out.mismatch_slope = loglog_slope(x, out.dual_mismatch);
    } else {
      out.deviation_slope = out.mismatch_slope = -inf;
    }
  }
  return out;
}

}  // namespace gkdv
