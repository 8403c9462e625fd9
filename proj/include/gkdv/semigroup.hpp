#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkdv/bloch.hpp"
#include "gkdv/reduced.hpp"
#include "gkdv/spectrum.hpp"

namespace gkdv {

/// Real function on P unit cells, M samples per cell, x in [-P/2, P/2).
struct LocalizedDatum {
  int P = 0;
  int M = 0;
  std::vector<double> values;

  double x(std::size_t i) const { return -0.5 * P + static_cast<double>(i) / M; }
};

LocalizedDatum gaussian_datum(int P, int M, double width, double center = 0.0, double amplitude = 1.0);

struct PropagatorOptions {
  double tol_re = 0.0;  // <= 0: 1e-6 k^3
  int threads = 0;
  /// false keeps genuinely growing modes instead of refusing; used to check
  /// structural properties (mass, group law) on unstable waves.
  bool refuse_unstable = true;
};

/// e^{tL} on the line, one Bloch row at a time. Each row splits into the
/// spectral cluster near 0 (Schur block, exponentiated as a small matrix) and
/// the remaining simple eigenvalues (eigen-decomposition). Real parts with
/// |Re lambda| <= tol_re are set to 0; anything larger refuses to build.
class Propagator {
 public:
  Propagator(const WaveProfile& profile, const Nonlinearity& f, int P, int N, const PropagatorOptions& opt = {});

  LocalizedDatum apply(const LocalizedDatum& u0, double t) const;

  int P() const { return P_; }
  int N() const { return N_; }
  double tol_re() const { return tol_re_; }
  /// Largest |Re lambda| removed by clipping.
  double max_clipped() const { return max_clipped_; }
  /// Energy fraction of the datum in modes |j| > N, dropped by the last apply.
  double last_truncated_fraction() const { return truncated_; }

  /// Coordinates of a row vector in the row's splitting: the cluster block
  /// first, then one coordinate per outer eigenvector, all evolved to time t.
  CVector modal_coordinates(int row, const CVector& v, double t) const;
  int cluster_size(int row) const { return static_cast<int>(rows_[row].T11.rows()); }

 private:
  struct Row {
    double xi = 0.0;
    CMatrix basis, dual, T11;
    CMatrix right, left;
    CVector lambda;
  };
  CVector evolve_row(const Row& r, const CVector& v, double t) const;

  int P_, N_;
  double tol_re_;
  double max_clipped_ = 0.0;
  mutable double truncated_ = 0.0;
  std::vector<Row> rows_;
  int threads_;
};

LocalizedDatum propagate(const WaveProfile& profile, const Nonlinearity& f, const LocalizedDatum& u0, double t, int N,
                         const PropagatorOptions& opt = {});

enum class NormKind { L2, H1, H2, Linf, L1capH1 };
const char* to_string(NormKind k);
NormKind parse_norm_kind(const std::string& s);

/// Grid norm of a P-periodic sample array (derivatives spectral).
double grid_norm(const std::vector<double>& u, int M, NormKind kind);

enum class Candidate { unmodulated, phase_filtered };
const char* to_string(Candidate c);

struct ModulatedNormEstimate {
  double value = 0.0;
  Candidate candidate_used = Candidate::unmodulated;
  double unmodulated = 0.0;
  std::optional<double> phase_filtered;
  std::vector<double> w;
  std::vector<double> psi;
  double reconstruction_residual = 0.0;
  std::string warning;
};

/// Low-Floquet phase extraction for one wave: transported duals of q1 on the
/// rows |xi| <= xi_cut of a P-cell grid. Built once, reused across times.
class PhaseFilter {
 public:
  PhaseFilter(const SmallAmplitudeFamily& fam, double delta, int P, int M, double xi_cut = 0.5,
              const TransportOptions& topt = {});

  bool available() const { return available_; }
  const std::string& reason() const { return reason_; }
  double xi_cut() const { return xi_cut_; }

  ModulatedNormEstimate estimate(const LocalizedDatum& u, NormKind kind) const;

 private:
  int P_, M_, N_;
  double delta_, xi_cut_;
  bool available_ = false;
  std::string reason_;
  std::vector<double> dv_;              // v' on one cell, M samples
  std::vector<int> rows_;               // Bloch rows inside the cut
  std::vector<CVector> dual_q1_;        // per row, modes -N..N
};

/// Unmodulated estimate only: the phase branch needs a wave family.
ModulatedNormEstimate modulated_norm(const LocalizedDatum& u, NormKind kind);
ModulatedNormEstimate modulated_norm(const LocalizedDatum& u, NormKind kind, const PhaseFilter& filter);

struct DecayOptions {
  int P = 512;
  int M = 64;
  int N = 16;
  double width = 1.0;
  std::vector<double> times{10, 21, 46, 100, 215, 464, 1000};
  double xi_cut = 0.5;
  double adequacy_threshold = 1e-10;  // relative to sup |u0|, outer 10%
  bool require_stable = true;
  int n_xi = 128;
  int threads = 0;
};

struct DecayRow {
  double t = 0.0;
  double N_Linf = 0.0;
  double ratio_H0 = 0.0;
  double ratio_H1 = 0.0;
  double ratio_H2 = 0.0;
  bool adequate = true;
  double boundary_max = 0.0;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double slope = 0.0;
  double sup_ratio[3] = {0, 0, 0};
  double spread_ratio[3] = {0, 0, 0};  // max/min over times
  bool adequate = true;
  bool trusted = true;
  std::string verdict;  // stability verdict of the wave, or "constant_state"
  double width = 0.0;
  double truncated_fraction = 0.0;
  bool phase_filter_used = false;
};

DecayReport decay_experiment(const SmallAmplitudeFamily& fam, double delta, const DecayOptions& opt = {});

/// Least-squares slope of log y against log(1 + t).
double decay_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace gkdv
