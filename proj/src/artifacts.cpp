#include "gkdv/artifacts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "gkdv/error.hpp"

namespace gkdv {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw Error(ErrorKind::argument, "table row width differs from header");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        s += '"';
        for (char c : cells[i]) s += c == '"' ? std::string("\"\"") : std::string(1, c);
        s += '"';
      } else {
        s += cells[i];
      }
    }
    return s + '\n';
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

nlohmann::json Table::json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
    arr.push_back(o);
  }
  return arr;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ArtifactWriter::ArtifactWriter(std::string dir, std::vector<std::string> formats)
    : dir_(std::move(dir)), formats_(std::move(formats)), started_(utc_now()) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir_ + ": " + ec.message());
}

void ArtifactWriter::write(const std::string& file, const std::string& content) {
  const fs::path p = fs::path(dir_) / file;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for " + p.string());
  if (std::find(files_.begin(), files_.end(), file) == files_.end()) files_.push_back(file);
}

void ArtifactWriter::table(const std::string& name, const Table& t) {
  for (const auto& f : formats_) {
    if (f == "csv") write(name + ".csv", t.csv());
    if (f == "json") write(name + ".json", t.json().dump(2) + "\n");
  }
}

void ArtifactWriter::json(const std::string& file, const nlohmann::json& j) { write(file, j.dump(2) + "\n"); }

void ArtifactWriter::manifest(const std::string& subcommand, const nlohmann::json& config,
                              const nlohmann::json& verdicts) {
  nlohmann::json m = {
      {"subcommand", subcommand},
      {"config_hash", hex64(fnv1a(config.dump()))},
      {"tool_version", tool_version},
      {"started", started_},
      {"finished", utc_now()},
      {"files", files_},
      {"verdicts", verdicts},
  };
  const fs::path p = fs::path(dir_) / "manifest.json";
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
  out << m.dump(2) << "\n";
}

}  // namespace gkdv
