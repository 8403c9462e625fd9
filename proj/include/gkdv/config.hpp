#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkdv/nonlinearity.hpp"
#include "gkdv/spectrum.hpp"

namespace gkdv {

struct WaveSpec {
  enum class Mode { small_amplitude, parameters } mode = Mode::small_amplitude;
  double u0_guess = 0.0;
  double c = -1.0;
  double lambda = 0.0;
  double delta = 0.1;  // small-amplitude mode
  double mu = 0.0;     // parameters mode
};

struct Discretization {
  int M = 256;      // profile samples per period
  int N = 32;       // Hill truncation
  int Nxi = 128;    // Floquet grid
  int P = 512;      // cells for localized data
  int M_cell = 128; // samples per cell for localized data
};

struct Tolerances {
  StabilityTolerances stability{};
  double match_tol = 1e-6;
  double fd_tol = 1e-2;
  double struct_tol = 1e-7;  // relative to ||D||
  double adequacy = 1e-10;
};

struct ReducedSettings {
  int N = 16;
  int M = 128;
  double xi = 0.02;
  double h_xi = 1e-2;
  double h_delta = 2e-2;
  std::vector<double> fit_deltas{0.02, 0.04, 0.06};
  std::vector<double> fit_xis{0.005, 0.01, 0.02};
};

struct EvolutionSettings {
  double t = 100.0;
  std::vector<double> times{10, 21, 46, 100, 215, 464, 1000};
  double width = 1.0;
  double xi_cut = 0.5;
  std::string norm = "Linf";
};

struct SweepSettings {
  std::vector<double> deltas{0.02, 0.04, 0.06, 0.08, 0.1, 0.12, 0.14};
  std::vector<std::string> presets;  // empty: the configured wave
};

struct OutputSettings {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  bool has(const std::string& f) const;
};

struct RunConfig {
  nlohmann::json nonlinearity = {{"type", "power"}, {"a", 1.0}, {"p", 2}};
  WaveSpec wave{};
  Discretization grid{};
  Tolerances tol{};
  ReducedSettings reduced{};
  EvolutionSettings evolution{};
  SweepSettings sweep{};
  OutputSettings output{};

  Nonlinearity make_nonlinearity() const;
  /// Canonical JSON with every default filled in.
  nlohmann::json to_json() const;
};

/// Base configurations: "kdv" (f = u^2, u0 = 0, c = -1) and "mkdv"
/// (f = u^3, u0 = 1, c = -1, lambda = 2).
nlohmann::json preset(const std::string& name);

/// Validates and converts; errors carry the offending field path.
RunConfig parse_config(const nlohmann::json& j);
/// Raw JSON of a config file (parse errors become config errors).
nlohmann::json read_config_json(const std::string& path);
RunConfig load_config(const std::string& path);

/// key=value with a dotted key; the value is read as JSON when it parses,
/// otherwise as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace gkdv
