#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gkdv {

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);
/// %.17g, with nan/inf spelled out.
std::string format_double(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
  nlohmann::json json() const;  // array of objects keyed by header
};

/// Single writer for one run directory; records every file it produces.
class ArtifactWriter {
 public:
  ArtifactWriter(std::string dir, std::vector<std::string> formats);

  /// Writes name.csv and/or name.json depending on the formats.
  void table(const std::string& name, const Table& t);
  void json(const std::string& file, const nlohmann::json& j);
  void manifest(const std::string& subcommand, const nlohmann::json& config, const nlohmann::json& verdicts);

  const std::vector<std::string>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  void write(const std::string& file, const std::string& content);

  std::string dir_;
  std::vector<std::string> formats_;
  std::vector<std::string> files_;
  std::string started_;
};

inline constexpr const char* tool_version = "0.1.0";

}  // namespace gkdv
