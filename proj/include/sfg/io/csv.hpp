#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfg/errors.hpp"
#include "sfg/io/config.hpp"

#ifndef SFG_VERSION
#define SFG_VERSION "unversioned"
#endif

namespace sfg::io {

/// Column-major table written as CSV with shortest round-trip numbers.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != columns.front().size())
      throw ContractViolation("column '" + name + "' length differs from the table");
    header.push_back(std::move(name));
    columns.push_back(std::move(values));
  }

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline std::string format_cell(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline void write_csv(const std::filesystem::path& path, const Table& t) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < t.header.size(); ++c) out << (c ? "," : "") << t.header[c];
  out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << format_cell(t.columns[c][r]);
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

/// Reads a file produced by write_csv back into a Table.
inline Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Table t;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
      if (i == s.size() || s[i] == ',') {
        cells.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    return cells;
  };
  if (!std::getline(in, line)) return t;
  t.header = split(line);
  t.columns.assign(t.header.size(), {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw Error("ragged row in " + path.string());
    for (std::size_t c = 0; c < cells.size(); ++c) t.columns[c].push_back(detail::parse_double(cells[c]));
  }
  return t;
}

/// Sidecar metadata: the rendered config reproduces the CSV on its own.
struct RunMetadata {
  const RunConfig* config = nullptr;
  std::string description;
  std::vector<std::string> units;  ///< one entry per CSV column
  std::size_t n_trajectories = 0;
  std::size_t n_used = 0;
  std::size_t n_diverged = 0;
  nlohmann::json extra = nlohmann::json::object();
};

inline void write_metadata(const std::filesystem::path& csv_path, const Table& t, const RunMetadata& m) {
  nlohmann::json j;
  j["csv"] = csv_path.filename().string();
  j["description"] = m.description;
  j["code_version"] = SFG_VERSION;
  j["columns"] = t.header;
  j["units"] = m.units;
  if (m.config) {
    j["config"] = render(*m.config);
    j["seed"] = m.config->seed;
    j["resolved_dt"] = m.config->trajectory().dt;
  }
  j["trajectories"] = {{"requested", m.n_trajectories}, {"used", m.n_used}, {"diverged", m.n_diverged}};
  j["extra"] = m.extra;
  auto side = csv_path;
  side += ".meta.json";
  std::ofstream out(side);
  if (!out) throw Error("cannot open " + side.string() + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace sfg::io
