#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/bloch.hpp"
#include "gkdv/linalg.hpp"

namespace gkdv {

EigenSystem eigs(const BlochSymbol& symbol);

/// |lambda| <= k^3 (pi N / 2)^3: the part of a truncated spectrum that is
/// stable under N -> N + 8.
double trusted_radius(double k, int N);

struct SpectralCurve {
  int label = 0;      // dominant Fourier mode at xi = -pi
  int end_label = 0;  // dominant Fourier mode at xi = pi
  std::vector<double> xi;
  std::vector<cplx> lambdas;
  std::vector<CVector> eigvecs;
  std::vector<CVector> left_eigvecs;
};

struct TrackingOptions {
  double window_radius = 0.0;  // 0: trusted_radius
  double match_tol = 1e-6;
  int threads = 0;
  bool keep_vectors = true;
};

struct CurveSet {
  int N = 0;
  double k = 0.0;
  double window_radius = 0.0;
  std::vector<SpectralCurve> curves;
  int collisions = 0;
  /// max |lambda_j(pi) - lambda_{j+1}(-pi)| over curves inside the window.
  double gluing_residual = 0.0;
};

/// Uniform grid of n exponents in (-pi, pi], ending at pi.
std::vector<double> floquet_grid(int n);

/// Eigenvalue branches followed across xi_grid (uniform in (-pi, pi]); an
/// extra anchor at -pi labels each branch by its dominant Fourier mode there.
CurveSet track_curves(const HillOperator& op, const std::vector<double>& xi_grid, const TrackingOptions& opt = {});
CurveSet track_curves(const WaveProfile& profile, const Nonlinearity& f, const std::vector<double>& xi_grid, int N,
                      const TrackingOptions& opt = {});

/// The three origin branches sampled at xi = h, 2h, 3h and extrapolated to
/// 0+ through mu = lambda / (i xi).
struct OriginStencil {
  double h = 0.0;
  int multiplicity = 0;          // eigenvalues within r0 of 0 at xi = 0
  double r0 = 0.0;
  double origin_spread = 0.0;    // largest |lambda| among the origin cluster at xi = 0
  std::array<std::array<cplx, 3>, 3> samples{};  // [branch][stencil point]
  std::array<cplx, 3> slopes{};
  std::array<cplx, 3> third_derivatives{};
  double max_real_part = 0.0;    // over the stencil samples
};

OriginStencil origin_stencil(const HillOperator& op, double h, double r0);

enum class Verdict { dispersively_stable, spectrally_unstable, degenerate, inconclusive };
const char* to_string(Verdict v);

struct StabilityTolerances {
  double tol_re = 0.0;       // 0: 1e-6 k^3
  double r0 = 0.0;           // 0: 1e-4 k^3
  double slope_tol = 0.0;    // 0: 1e-3 k^3
  double curv_tol = 0.0;     // 0: 1e-3 k^3
  double gap_tol = 0.0;      // 0: 1e-6 k^3
  double origin_step = 0.0;  // 0: 0.1 max(|delta|, 0.02)

  /// Defaults filled in from k and the amplitude.
  StabilityTolerances resolved(double k, double delta) const;
};

struct StabilityReport {
  double max_real_part = 0.0;
  int origin_multiplicity = 0;
  std::array<cplx, 3> origin_slopes{};
  double min_slope_separation = 0.0;
  double min_nonzero_curvature = 0.0;
  double min_gap = 0.0;
  std::array<cplx, 3> origin_third_derivatives{};
  double min_third_derivative = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> failed_conditions;
  int curve_collisions = 0;
  double gluing_residual = 0.0;
  int curve_count = 0;
  StabilityTolerances tolerances;
  OriginStencil origin;
  double k = 0.0;
  int N = 0;
};

StabilityReport stability_report(const CurveSet& curves, const OriginStencil& origin, const StabilityTolerances& tol);

/// Full pipeline: Hill operator, tracked curves, origin stencil, report.
struct StabilityRun {
  CurveSet curves;
  StabilityReport report;
};
StabilityRun analyze_stability(const WaveProfile& profile, const Nonlinearity& f, int N, int n_xi,
                               const StabilityTolerances& tol = {}, int threads = 0, double match_tol = 1e-6);

/// max over lambda with |lambda| <= window of the distance from -conj(lambda)
/// to the set.
double hamiltonian_symmetry_residual(const CVector& eigenvalues, double window = 0.0);

struct HighFrequencyResidual {
  int label = 0;
  double residual_per_mode = 0.0;  // sup_xi |lambda_j - i k^3 (2 pi j + xi)^3| / |j|
};

/// Curves with 3 <= |j| <= N/2; others are skipped.
std::vector<HighFrequencyResidual> high_frequency_residuals(const CurveSet& curves);

struct EigenfunctionAsymptotics {
  std::vector<int> modes;
  std::vector<double> deviation;       // ||r_j - e_j||, r_j scaled so (r_j)_j = 1
  std::vector<double> dual_mismatch;   // ||r_j - l_j|| with the same scaling of l_j
  double deviation_slope = 0.0;
  double mismatch_slope = 0.0;
  bool conclusive = false;
};

EigenfunctionAsymptotics eigenfunction_asymptotics(const HillOperator& op, int j_min, int j_max, double xi = 0.25);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gkdv
