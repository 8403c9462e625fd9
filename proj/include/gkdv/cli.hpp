#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gkdv/artifacts.hpp"
#include "gkdv/config.hpp"

namespace gkdv {

/// Exit codes: 0 success, 2 computed but not dispersively stable (the
/// `stability` subcommand only), 1 any error.
struct RunResult {
  int exit_code = 0;
  nlohmann::json verdicts = nlohmann::json::object();
  std::vector<std::string> lines;  // human-readable summary for stdout
};

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand, writing its artifacts (but not the manifest).
RunResult run_subcommand(const std::string& name, const RunConfig& cfg, ArtifactWriter& out, int threads = 0);

/// Thread count: explicit value if > 0, else BLOCH_GKDV_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested);

}  // namespace gkdv
