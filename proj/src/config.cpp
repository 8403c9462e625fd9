#include "gkdv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gkdv/error.hpp"
#include "gkdv/fourier.hpp"

namespace gkdv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::config, path + ": " + msg);
}

// Reads the members of one JSON object and rejects any key not consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(where(), "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }
  int integer(const std::string& key, int def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }
  std::string string(const std::string& key, const std::string& def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_[key].is_string()) fail(at(key), "expected a string");
    return j_[key].get<std::string>();
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<std::string> strings(const std::string& key, std::vector<std::string> def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_array()) fail(at(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }
  std::optional<Reader> object(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return Reader(j_[key], at(key));
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_[key];
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
  }
  std::string where() const { return path_.empty() ? "<root>" : path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) fail(path, msg);
}

Nonlinearity nonlinearity_from(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string type = r.string("type", "");
  try {
    if (type == "power") {
      const double a = r.number("a", 1.0);
      const int p = r.integer("p", 2);
      r.finish();
      return Nonlinearity::power(a, p);
    }
    if (type == "polynomial") {
      const auto c = r.numbers("coeffs", {});
      r.finish();
      return Nonlinearity::polynomial(c);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    fail(path, e.what());
  }
  fail(r.at("type"), "expected \"power\" or \"polynomial\", got \"" + type + "\"");
}

}  // namespace

bool OutputSettings::has(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

Nonlinearity RunConfig::make_nonlinearity() const { return nonlinearity_from(nonlinearity, "nonlinearity"); }

json preset(const std::string& name) {
  if (name == "kdv")
    return {{"nonlinearity", {{"type", "power"}, {"a", 1.0}, {"p", 2}}},
            {"wave", {{"mode", "small-amplitude"}, {"u0_guess", 0.0}, {"c", -1.0}, {"lambda", 0.0}, {"delta", 0.1}}}};
  if (name == "mkdv")
    return {{"nonlinearity", {{"type", "power"}, {"a", 1.0}, {"p", 3}}},
            {"wave", {{"mode", "small-amplitude"}, {"u0_guess", 1.0}, {"c", -1.0}, {"lambda", 2.0}, {"delta", 0.08}}}};
  throw Error(ErrorKind::config, "unknown preset '" + name + "' (expected kdv or mkdv)");
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Reader root(j, "");

  if (root.has("nonlinearity")) {
    cfg.nonlinearity = root.raw("nonlinearity");
    nonlinearity_from(cfg.nonlinearity, "nonlinearity");
  } else {
    root.raw("nonlinearity");
  }

  if (auto w = root.object("wave")) {
    const std::string mode = w->string("mode", "small-amplitude");
    WaveSpec& s = cfg.wave;
    s.u0_guess = w->number("u0_guess", s.u0_guess);
    s.c = w->number("c", s.c);
    s.lambda = w->number("lambda", s.lambda);
    if (mode == "small-amplitude") {
      s.mode = WaveSpec::Mode::small_amplitude;
      s.delta = w->number("delta", s.delta);
    } else if (mode == "parameters") {
      s.mode = WaveSpec::Mode::parameters;
      require(w->has("mu"), w->at("mu"), "required in parameters mode");
      s.mu = w->number("mu", 0.0);
    } else {
      fail(w->at("mode"), "expected \"small-amplitude\" or \"parameters\"");
    }
    w->finish();
  }

  Discretization& g = cfg.grid;
  if (auto r = root.object("grid")) {
    g.M = r->integer("M", g.M);
    r->finish();
  }
  if (auto r = root.object("discretization")) {
    const int M = r->integer("M", g.M);
    if (root.has("grid") && r->has("M") && M != g.M) fail(r->at("M"), "conflicts with grid.M");
    g.M = M;
    g.N = r->integer("N", g.N);
    g.Nxi = r->integer("Nxi", g.Nxi);
    g.P = r->integer("P", g.P);
    g.M_cell = r->integer("M_cell", g.M_cell);
    r->finish();
  }
  require(g.M >= 8 && is_power_of_two(g.M), "discretization.M", "must be a power of two >= 8");
  require(g.N >= 1, "discretization.N", "must be >= 1");
  require(g.M >= 4 * g.N, "discretization.M", "must be >= 4 N (aliasing)");
  require(g.Nxi >= 64 && g.Nxi <= 1 << 16, "discretization.Nxi", "must lie in [64, 65536]");
  require(g.P >= 2 && is_power_of_two(g.P), "discretization.P", "must be a power of two >= 2");
  require(g.M_cell >= 2 * g.N + 2 && is_power_of_two(g.M_cell), "discretization.M_cell",
          "must be a power of two >= 2 N + 2");

  if (auto r = root.object("tolerances")) {
    StabilityTolerances& s = cfg.tol.stability;
    s.tol_re = r->number("tol_re", s.tol_re);
    s.r0 = r->number("r0", s.r0);
    s.slope_tol = r->number("slope_tol", s.slope_tol);
    s.curv_tol = r->number("curv_tol", s.curv_tol);
    s.gap_tol = r->number("gap_tol", s.gap_tol);
    s.origin_step = r->number("origin_step", s.origin_step);
    cfg.tol.match_tol = r->number("match_tol", cfg.tol.match_tol);
    cfg.tol.fd_tol = r->number("fd_tol", cfg.tol.fd_tol);
    cfg.tol.struct_tol = r->number("struct_tol", cfg.tol.struct_tol);
    cfg.tol.adequacy = r->number("adequacy", cfg.tol.adequacy);
    for (const char* key : {"tol_re", "r0", "slope_tol", "curv_tol", "gap_tol", "origin_step"})
      require(r->number(key, 0.0) >= 0.0, r->at(key), "must be >= 0 (0 selects the default)");
    for (const char* key : {"match_tol", "fd_tol", "struct_tol", "adequacy"})
      require(r->number(key, 1.0) > 0.0, r->at(key), "must be > 0");
    r->finish();
  }

  if (auto r = root.object("reduced")) {
    ReducedSettings& s = cfg.reduced;
    s.N = r->integer("N", s.N);
    s.M = r->integer("M", s.M);
    s.xi = r->number("xi", s.xi);
    s.h_xi = r->number("h_xi", s.h_xi);
    s.h_delta = r->number("h_delta", s.h_delta);
    s.fit_deltas = r->numbers("fit_deltas", s.fit_deltas);
    s.fit_xis = r->numbers("fit_xis", s.fit_xis);
    r->finish();
    require(s.N >= 2 && s.M >= 4 * s.N && is_power_of_two(s.M), "reduced", "needs N >= 2, M >= 4N, M a power of two");
    require(std::abs(s.xi) <= 0.5, "reduced.xi", "must satisfy |xi| <= 0.5");
    require(s.h_xi > 0.0 && s.h_delta > 0.0, "reduced", "steps must be positive");
  }

  if (auto r = root.object("evolution")) {
    EvolutionSettings& s = cfg.evolution;
    s.t = r->number("t", s.t);
    s.times = r->numbers("times", s.times);
    s.width = r->number("width", s.width);
    s.xi_cut = r->number("xi_cut", s.xi_cut);
    s.norm = r->string("norm", s.norm);
    r->finish();
    require(s.width > 0.0, "evolution.width", "must be positive");
    require(s.xi_cut > 0.0 && s.xi_cut < 3.141592653589793, "evolution.xi_cut", "must lie in (0, pi)");
    for (std::size_t i = 0; i < s.times.size(); ++i)
      require(s.times[i] >= 0.0, "evolution.times[" + std::to_string(i) + "]", "must be >= 0");
    const std::set<std::string> norms{"L2", "H1", "H2", "Linf", "L1capH1"};
    require(norms.count(s.norm) > 0, "evolution.norm", "expected one of L2, H1, H2, Linf, L1capH1");
  }

  if (auto r = root.object("sweep")) {
    cfg.sweep.deltas = r->numbers("deltas", cfg.sweep.deltas);
    cfg.sweep.presets = r->strings("presets", cfg.sweep.presets);
    r->finish();
    require(cfg.sweep.deltas.size() <= 1000, "sweep.deltas", "at most 1000 points");
    for (std::size_t i = 0; i < cfg.sweep.presets.size(); ++i) {
      const auto& p = cfg.sweep.presets[i];
      require(p == "kdv" || p == "mkdv", "sweep.presets[" + std::to_string(i) + "]", "expected kdv or mkdv");
    }
  }

  if (auto r = root.object("output")) {
    cfg.output.dir = r->string("dir", cfg.output.dir);
    cfg.output.formats = r->strings("formats", cfg.output.formats);
    r->finish();
    for (std::size_t i = 0; i < cfg.output.formats.size(); ++i) {
      const auto& f = cfg.output.formats[i];
      require(f == "csv" || f == "json", "output.formats[" + std::to_string(i) + "]", "expected csv or json");
    }
  }

  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_config_json(path)); }

json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::config, "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw Error(ErrorKind::config, "override key '" + key + "' has an empty segment");
    if (!node->is_object() && !node->is_null())
      throw Error(ErrorKind::config, "override key '" + key + "' descends into a non-object");
    node = &(*node)[parts[i]];
  }
  *node = value;
}

json RunConfig::to_json() const {
  const auto& s = tol.stability;
  json w = {{"mode", wave.mode == WaveSpec::Mode::parameters ? "parameters" : "small-amplitude"},
            {"u0_guess", wave.u0_guess},
            {"c", wave.c},
            {"lambda", wave.lambda}};
  if (wave.mode == WaveSpec::Mode::parameters)
    w["mu"] = wave.mu;
  else
    w["delta"] = wave.delta;
  return {
      {"nonlinearity", nonlinearity},
      {"wave", w},
      {"discretization", {{"M", grid.M}, {"N", grid.N}, {"Nxi", grid.Nxi}, {"P", grid.P}, {"M_cell", grid.M_cell}}},
      {"tolerances",
       {{"tol_re", s.tol_re},
        {"r0", s.r0},
        {"slope_tol", s.slope_tol},
        {"curv_tol", s.curv_tol},
        {"gap_tol", s.gap_tol},
        {"origin_step", s.origin_step},
        {"match_tol", tol.match_tol},
        {"fd_tol", tol.fd_tol},
        {"struct_tol", tol.struct_tol},
        {"adequacy", tol.adequacy}}},
      {"reduced",
       {{"N", reduced.N},
        {"M", reduced.M},
        {"xi", reduced.xi},
        {"h_xi", reduced.h_xi},
        {"h_delta", reduced.h_delta},
        {"fit_deltas", reduced.fit_deltas},
        {"fit_xis", reduced.fit_xis}}},
      {"evolution",
       {{"t", evolution.t},
        {"times", evolution.times},
        {"width", evolution.width},
        {"xi_cut", evolution.xi_cut},
        {"norm", evolution.norm}}},
      {"sweep", {{"deltas", sweep.deltas}, {"presets", sweep.presets}}},
      {"output", {{"dir", output.dir}, {"formats", output.formats}}},
  };
}

}  // namespace gkdv
