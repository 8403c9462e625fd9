#include "gkdv/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "gkdv/error.hpp"
#include "gkdv/parallel.hpp"
#include "gkdv/reduced.hpp"
#include "gkdv/semigroup.hpp"
#include "gkdv/spectrum.hpp"

namespace gkdv {

using nlohmann::json;

namespace {

std::string fd(double x) { return format_double(x); }

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_json(cplx z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

template <class Mat>
json matrix_json(const Mat& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), s = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx z = m(i, j);
      r.push_back(num(z.real()));
      s.push_back(num(z.imag()));
    }
    re.push_back(r);
    im.push_back(s);
  }
  return {{"re", re}, {"im", im}};
}

json real_matrix_json(const Matrix3d& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) {
    json r = json::array();
    for (int j = 0; j < 3; ++j) r.push_back(num(m(i, j)));
    out.push_back(r);
  }
  return out;
}

json tolerances_json(const StabilityTolerances& t) {
  return {{"tol_re", t.tol_re},       {"r0", t.r0},           {"slope_tol", t.slope_tol},
          {"curv_tol", t.curv_tol},   {"gap_tol", t.gap_tol}, {"origin_step", t.origin_step}};
}

json report_json(const StabilityReport& r) {
  json slopes = json::array(), thirds = json::array();
  for (int i = 0; i < 3; ++i) {
    slopes.push_back(complex_json(r.origin_slopes[i]));
    thirds.push_back(complex_json(r.origin_third_derivatives[i]));
  }
  return {
      {"verdict", to_string(r.verdict)},
      {"failed_conditions", r.failed_conditions},
      {"max_real_part", r.max_real_part},
      {"origin_multiplicity", r.origin_multiplicity},
      {"origin_spread", r.origin.origin_spread},
      {"origin_step", r.origin.h},
      {"origin_slopes", slopes},
      {"min_slope_separation", num(r.min_slope_separation)},
      {"min_nonzero_curvature", num(r.min_nonzero_curvature)},
      {"min_gap", num(r.min_gap)},
      {"origin_third_derivatives", thirds},
      {"min_third_derivative", num(r.min_third_derivative)},
      {"curve_collisions", r.curve_collisions},
      {"gluing_residual", r.gluing_residual},
      {"curve_count", r.curve_count},
      {"k", r.k},
      {"N", r.N},
      {"tolerances", tolerances_json(r.tolerances)},
  };
}

Table curves_table(const CurveSet& cs) {
  Table t{{"j", "xi", "re_lambda", "im_lambda"}, {}};
  for (const auto& c : cs.curves)
    for (std::size_t i = 0; i < c.xi.size(); ++i)
      t.add({std::to_string(c.label), fd(c.xi[i]), fd(c.lambdas[i].real()), fd(c.lambdas[i].imag())});
  return t;
}

WaveProfile build_wave(const RunConfig& cfg, const Nonlinearity& f) {
  const WaveSpec& w = cfg.wave;
  if (w.mode == WaveSpec::Mode::parameters) {
    const double u0 = critical_point(f, w.c, w.lambda, w.u0_guess);
    return profile_samples(f, {w.c, w.lambda, w.mu}, u0, cfg.grid.M);
  }
  return signed_small_amplitude_wave(f, w.u0_guess, w.c, w.lambda, w.delta, cfg.grid.M);
}

SmallAmplitudeFamily build_family(const RunConfig& cfg, const Nonlinearity& f, const std::string& who) {
  if (cfg.wave.mode != WaveSpec::Mode::small_amplitude)
    throw Error(ErrorKind::config, "wave.mode: `" + who + "` needs a small-amplitude wave");
  SmallAmplitudeFamily fam;
  fam.f = f;
  fam.u0_guess = cfg.wave.u0_guess;
  fam.c = cfg.wave.c;
  fam.lambda = cfg.wave.lambda;
  fam.M = cfg.reduced.M;
  fam.N = cfg.reduced.N;
  return fam;
}

RunResult cmd_profile(const RunConfig& cfg, ArtifactWriter& out) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const WaveProfile w = build_wave(cfg, f);
  Table t{{"x", "v"}, {}};
  for (int m = 0; m < w.M(); ++m) t.add({fd(static_cast<double>(m) / w.M()), fd(w.samples[m])});
  out.table("profile", t);
  json j = {{"c", w.params.c},          {"lambda", w.params.lambda}, {"mu", w.params.mu},
            {"u0", w.u0},               {"k", w.k},                  {"u_minus", w.u_minus},
            {"u_plus", w.u_plus},       {"M", w.M()},                {"energy_residual", energy_residual(f, w)},
            {"delta", w.delta ? json(*w.delta) : json(nullptr)}};
  if (w.delta) {
    const auto pd = parameter_derivatives(f, w.u0, w.params.c, w.params.lambda, *w.delta);
    j["wronskian"] = pd.wronskian;
    j["dk_ddelta"] = pd.dk_ddelta;
  }
  out.json("profile_report.json", j);
  RunResult r;
  r.lines.push_back("k = " + fd(w.k) + ", u in [" + fd(w.u_minus) + ", " + fd(w.u_plus) + "]");
  r.verdicts = {{"k", w.k}};
  return r;
}

RunResult cmd_spectrum(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const WaveProfile w = build_wave(cfg, f);
  const HillOperator op(w, f, cfg.grid.N);
  TrackingOptions topt;
  topt.threads = threads;
  topt.keep_vectors = false;
  topt.match_tol = cfg.tol.match_tol;
  const CurveSet cs = track_curves(op, floquet_grid(cfg.grid.Nxi), topt);
  out.table("curves", curves_table(cs));
  double ham = 0.0;
  for (double xi : {0.0, 0.3, -0.3, 1.0})
    ham = std::max(ham, hamiltonian_symmetry_residual(op.at(xi).matrix.eigenvalues(), cs.window_radius));
  out.json("spectrum.json", {{"N", cs.N},
                             {"k", cs.k},
                             {"window_radius", cs.window_radius},
                             {"curve_count", cs.curves.size()},
                             {"collisions", cs.collisions},
                             {"gluing_residual", cs.gluing_residual},
                             {"hamiltonian_symmetry_residual", ham}});
  RunResult r;
  r.lines.push_back(std::to_string(cs.curves.size()) + " curves, " + std::to_string(cs.collisions) +
                    " collisions, gluing residual " + fd(cs.gluing_residual));
  r.verdicts = {{"curve_count", cs.curves.size()}};
  return r;
}

RunResult cmd_stability(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const WaveProfile w = build_wave(cfg, f);
  const StabilityRun run =
      analyze_stability(w, f, cfg.grid.N, cfg.grid.Nxi, cfg.tol.stability, threads, cfg.tol.match_tol);
  out.table("curves", curves_table(run.curves));
  out.json("report.json", report_json(run.report));
  RunResult r;
  r.lines.push_back(std::string("verdict: ") + to_string(run.report.verdict));
  for (const auto& c : run.report.failed_conditions) r.lines.push_back("  failed: " + c);
  r.verdicts = {{"stability", to_string(run.report.verdict)}};
  r.exit_code = run.report.verdict == Verdict::dispersively_stable ? 0 : 2;
  return r;
}

RunResult cmd_bf_index(const RunConfig& cfg, ArtifactWriter& out) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const double u0 = critical_point(f, cfg.wave.c, cfg.wave.lambda, cfg.wave.u0_guess);
  const BFIndex bf = benjamin_feir_index(f, u0, cfg.wave.c);
  out.json("bf_index.json",
           {{"value", bf.value}, {"sign", to_string(bf.sign)}, {"u0", u0}, {"c0", cfg.wave.c}, {"tolerance", bf.tolerance}});
  RunResult r;
  r.lines.push_back("bf_index = " + fd(bf.value) + " (" + to_string(bf.sign) + ")");
  r.verdicts = {{"bf_sign", to_string(bf.sign)}};
  return r;
}

json split_json(const SplitEigenvalues& s) {
  return {{"plus", complex_json(s.plus)}, {"minus", complex_json(s.minus)}, {"third", complex_json(s.third)}};
}

RunResult cmd_reduced(const RunConfig& cfg, ArtifactWriter& out) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const SmallAmplitudeFamily fam = build_family(cfg, f, "reduced");
  const double delta = cfg.wave.delta, xi = cfg.reduced.xi;
  const OriginBasis basis = basis_at_origin(fam, delta);
  const ReducedMatrix R = reduced_matrix(fam, basis, xi);
  const Triangularization t = triangularize(R.B, delta);
  const double scale = R.D.cwiseAbs().maxCoeff();
  out.json("reduced.json", {
                               {"xi", xi},
                               {"delta", delta},
                               {"D", matrix_json(R.D)},
                               {"Dtilde", matrix_json(R.Dtilde)},
                               {"B", real_matrix_json(R.B)},
                               {"structure_residual", R.structure_residual},
                               {"struct_tol", cfg.tol.struct_tol * scale},
                               {"tilde_error", R.tilde_error},
                               {"alpha1", t.alpha1},
                               {"alpha2", t.alpha2},
                               {"discriminant", t.discriminant},
                               {"split", split_json(t.split)},
                               {"basis",
                                {{"wronskian_denominator", basis.wronskian_denominator},
                                 {"range_residual", basis.range_residual},
                                 {"biorthogonality_residual", basis.biorthogonality_residual},
                                 {"projector_radius", basis.radius},
                                 {"E12", basis.E12},
                                 {"E13", basis.E13}}},
                           });
  RunResult r;
  r.lines.push_back("Delta(xi = " + fd(xi) + ", delta = " + fd(delta) + ") = " + fd(t.discriminant));
  r.lines.push_back("structure residual " + fd(R.structure_residual));
  r.verdicts = {{"structure_ok", R.structure_residual <= cfg.tol.struct_tol * scale}};
  return r;
}

RunResult cmd_bf_check(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const SmallAmplitudeFamily fam = build_family(cfg, f, "bf-check");
  BFOptions opt;
  opt.h_xi = cfg.reduced.h_xi;
  opt.h_delta = std::max(cfg.reduced.h_delta, std::abs(cfg.wave.delta) / 4.0);
  opt.struct_tol = cfg.tol.struct_tol;
  opt.threads = threads;
  const BFDecomposition d = bf_decomposition(fam, cfg.wave.delta, cfg.reduced.xi, opt);
  const DiscriminantFit fit = discriminant_fit(fam, cfg.reduced.fit_deltas, cfg.reduced.fit_xis, opt);
  const double rel = std::abs(d.identity_lhs - d.identity_rhs) / std::abs(d.identity_rhs);
  json samples = json::array();
  for (const auto& s : fit.samples) samples.push_back({{"delta", s[0]}, {"xi", s[1]}, {"discriminant", s[2]}});
  out.json("bf_check.json", {
                                {"k0", d.k0},
                                {"bf_index", d.bf_index},
                                {"B21", d.B21},
                                {"B13", d.B13},
                                {"B32", d.B32},
                                {"d2B12_ddelta2", d.d2B12_ddelta2},
                                {"d2B12_dxi2", d.d2B12_dxi2},
                                {"dB11_ddelta", d.dB11_ddelta},
                                {"dB22_ddelta", d.dB22_ddelta},
                                {"B22_minus_B33", d.B22_minus_B33},
                                {"alpha1", d.alpha1},
                                {"alpha2", d.alpha2},
                                {"identity_lhs", d.identity_lhs},
                                {"identity_rhs", d.identity_rhs},
                                {"identity_relative_error", rel},
                                {"identity_error_estimate", d.identity_error_estimate},
                                {"fd_tol", cfg.tol.fd_tol},
                                {"identity_ok", rel <= cfg.tol.fd_tol},
                                {"b_coefficient", d.b_coefficient},
                                {"max_structure_residual", d.max_structure_residual},
                                {"xi", d.xi},
                                {"delta", d.delta},
                                {"discriminant", d.discriminant},
                                {"discriminant_from_eigenvalues", d.discriminant_from_eigenvalues},
                                {"split", split_json(d.split)},
                                {"fit", {{"a", fit.a}, {"b", fit.b}, {"residual", fit.residual}, {"samples", samples}}},
                            });
  RunResult r;
  r.lines.push_back("identity: lhs = " + fd(d.identity_lhs) + ", k0^2 Delta_BF = " + fd(d.identity_rhs) +
                    ", relative gap " + fd(rel) + " (estimate " + fd(d.identity_error_estimate) + ")");
  r.lines.push_back("Delta ~ a delta^2 + b xi^2 with a = " + fd(fit.a) + ", b = " + fd(fit.b));
  r.verdicts = {{"identity_ok", rel <= cfg.tol.fd_tol}, {"a_sign", fit.a > 0 ? "positive" : "negative"}};
  return r;
}

RunResult cmd_evolve(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const WaveProfile w = build_wave(cfg, f);
  const Propagator prop(w, f, cfg.grid.P, cfg.grid.N, {cfg.tol.stability.tol_re, threads});
  const LocalizedDatum u0 = gaussian_datum(cfg.grid.P, cfg.grid.M_cell, cfg.evolution.width);
  const LocalizedDatum u = prop.apply(u0, cfg.evolution.t);
  Table t{{"x", "u0", "u"}, {}};
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    t.add({fd(u.x(i)), fd(u0.values[i]), fd(u.values[i])});
    m0 += u0.values[i] / u0.M;
    m1 += u.values[i] / u.M;
  }
  out.table("evolve", t);
  const NormKind kind = parse_norm_kind(cfg.evolution.norm);
  ModulatedNormEstimate est = modulated_norm(u, kind);
  if (cfg.wave.mode == WaveSpec::Mode::small_amplitude) {
    const PhaseFilter filter(build_family(cfg, f, "evolve"), cfg.wave.delta, cfg.grid.P, cfg.grid.M_cell,
                             cfg.evolution.xi_cut);
    est = filter.estimate(u, kind);
  }
  out.json("evolve.json", {{"t", cfg.evolution.t},
                           {"mass_initial", m0},
                           {"mass_final", m1},
                           {"norm", cfg.evolution.norm},
                           {"modulated_norm", est.value},
                           {"candidate", to_string(est.candidate_used)},
                           {"unmodulated", est.unmodulated},
                           {"warning", est.warning},
                           {"tol_re", prop.tol_re()},
                           {"max_clipped", prop.max_clipped()},
                           {"truncated_fraction", prop.last_truncated_fraction()}});
  RunResult r;
  r.lines.push_back("N_" + cfg.evolution.norm + "(S(t)u0) <= " + fd(est.value) + " at t = " + fd(cfg.evolution.t));
  if (!est.warning.empty()) r.lines.push_back("warning: " + est.warning);
  return r;
}

RunResult cmd_decay(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  const Nonlinearity f = cfg.make_nonlinearity();
  const SmallAmplitudeFamily fam = build_family(cfg, f, "decay");
  DecayOptions opt;
  opt.P = cfg.grid.P;
  opt.M = cfg.grid.M_cell;
  opt.N = cfg.grid.N;
  opt.width = cfg.evolution.width;
  opt.times = cfg.evolution.times;
  opt.xi_cut = cfg.evolution.xi_cut;
  opt.adequacy_threshold = cfg.tol.adequacy;
  opt.n_xi = cfg.grid.Nxi;
  opt.threads = threads;
  const DecayReport rep = decay_experiment(fam, cfg.wave.delta, opt);
  Table t{{"t", "N_Linf", "N_H0_ratio", "N_H1_ratio", "N_H2_ratio", "adequacy_flag"}, {}};
  for (const auto& row : rep.rows)
    t.add({fd(row.t), fd(row.N_Linf), fd(row.ratio_H0), fd(row.ratio_H1), fd(row.ratio_H2), row.adequate ? "1" : "0"});
  out.table("decay", t);
  out.json("decay_report.json", {{"slope", rep.slope},
                                 {"sup_ratio", {rep.sup_ratio[0], rep.sup_ratio[1], rep.sup_ratio[2]}},
                                 {"spread_ratio", {rep.spread_ratio[0], rep.spread_ratio[1], rep.spread_ratio[2]}},
                                 {"adequate", rep.adequate},
                                 {"trusted", rep.trusted},
                                 {"stability_verdict", rep.verdict},
                                 {"width", rep.width},
                                 {"phase_filter_used", rep.phase_filter_used},
                                 {"truncated_fraction", rep.truncated_fraction},
                                 {"adequacy_threshold", opt.adequacy_threshold}});
  RunResult r;
  r.lines.push_back("decay slope " + fd(rep.slope) + (rep.trusted ? "" : " (untrusted: domain adequacy lost)"));
  r.verdicts = {{"decay_trusted", rep.trusted}};
  return r;
}

RunResult cmd_sweep(const RunConfig& cfg, ArtifactWriter& out, int threads) {
  struct Point {
    std::string name;
    RunConfig cfg;
    double delta;
  };
  std::vector<Point> pts;
  std::vector<std::pair<std::string, RunConfig>> bases;
  if (cfg.sweep.presets.empty()) {
    bases.emplace_back("config", cfg);
  } else {
    for (const auto& p : cfg.sweep.presets) {
      json j = cfg.to_json();
      const json pre = preset(p);
      j["nonlinearity"] = pre["nonlinearity"];
      j["wave"] = pre["wave"];
      bases.emplace_back(p, parse_config(j));
    }
  }
  for (const auto& [name, c] : bases)
    for (double d : cfg.sweep.deltas) pts.push_back({name, c, d});

  Table t{{"preset", "delta", "bf_index", "expected", "verdict", "matches", "max_real_part", "min_slope_separation",
           "min_nonzero_curvature", "min_third_derivative", "origin_multiplicity", "tol_re", "r0", "slope_tol",
           "curv_tol", "gap_tol", "error"},
          {}};
  const auto rows = parallel_map<std::vector<std::string>>(
      pts.size(),
      [&](std::size_t i) -> std::vector<std::string> {
        const Point& p = pts[i];
        std::vector<std::string> row{p.name, fd(p.delta), "", "", "", "", "", "", "", "", "", "", "", "", "", "", ""};
        try {
          const Nonlinearity f = p.cfg.make_nonlinearity();
          const WaveSpec& ws = p.cfg.wave;
          const double u0 = critical_point(f, ws.c, ws.lambda, ws.u0_guess);
          const BFIndex bf = benjamin_feir_index(f, u0, ws.c);
          row[2] = fd(bf.value);
          std::string expected = p.delta == 0.0                ? "degenerate"
                                 : bf.sign == BFSign::stable   ? "dispersively_stable"
                                 : bf.sign == BFSign::unstable ? "spectrally_unstable"
                                                               : "unknown";
          row[3] = expected;
          const WaveProfile w = signed_small_amplitude_wave(f, ws.u0_guess, ws.c, ws.lambda, p.delta, p.cfg.grid.M);
          // The sweep itself is the parallel map; each point runs serially.
          const StabilityRun run =
              analyze_stability(w, f, p.cfg.grid.N, p.cfg.grid.Nxi, p.cfg.tol.stability, 1, p.cfg.tol.match_tol);
          const StabilityReport& r = run.report;
          row[4] = to_string(r.verdict);
          row[5] = row[4] == expected ? "1" : "0";
          row[6] = fd(r.max_real_part);
          row[7] = fd(r.min_slope_separation);
          row[8] = fd(r.min_nonzero_curvature);
          row[9] = fd(r.min_third_derivative);
          row[10] = std::to_string(r.origin_multiplicity);
          row[11] = fd(r.tolerances.tol_re);
          row[12] = fd(r.tolerances.r0);
          row[13] = fd(r.tolerances.slope_tol);
          row[14] = fd(r.tolerances.curv_tol);
          row[15] = fd(r.tolerances.gap_tol);
        } catch (const std::exception& e) {
          row[16] = e.what();
        }
        return row;
      },
      threads);
  int matched = 0;
  for (const auto& row : rows) {
    t.add(row);
    matched += row[5] == "1";
  }
  out.table("sweep", t);
  RunResult r;
  r.lines.push_back(std::to_string(matched) + " of " + std::to_string(rows.size()) +
                    " rows match the Benjamin-Feir prediction");
  r.verdicts = {{"rows", rows.size()}, {"matching", matched}};
  return r;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"profile", "spectrum", "stability", "bf-index", "reduced",
                                              "bf-check", "evolve",   "decay",     "sweep"};
  return names;
}

RunResult run_subcommand(const std::string& name, const RunConfig& cfg, ArtifactWriter& out, int threads) {
  if (name == "profile") return cmd_profile(cfg, out);
  if (name == "spectrum") return cmd_spectrum(cfg, out, threads);
  if (name == "stability") return cmd_stability(cfg, out, threads);
  if (name == "bf-index") return cmd_bf_index(cfg, out);
  if (name == "reduced") return cmd_reduced(cfg, out);
  if (name == "bf-check") return cmd_bf_check(cfg, out, threads);
  if (name == "evolve") return cmd_evolve(cfg, out, threads);
  if (name == "decay") return cmd_decay(cfg, out, threads);
  if (name == "sweep") return cmd_sweep(cfg, out, threads);
  throw Error(ErrorKind::argument, "unknown subcommand '" + name + "'");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BLOCH_GKDV_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0 && n <= 4096) return static_cast<int>(n);
    throw Error(ErrorKind::config, "BLOCH_GKDV_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gkdv
