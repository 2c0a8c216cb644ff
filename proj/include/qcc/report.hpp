#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "qcc/config.hpp"

namespace qcc {

struct UnknownTable : Error { using Error::Error; };

/// Column-major numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[c][row]

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

struct Report {
  std::string artifact_version = "qcc 1.0.0";
  ordered_json config_echo;
  std::map<std::string, double> scalars;
  std::map<std::string, Table> tables;
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> timings_ms;

  bool all_pass() const {
    for (const auto& [k, v] : verdicts)
      if (!v) return false;
    return true;
  }

  void merge(const std::string& prefix, const Report& other) {
    for (const auto& [k, v] : other.scalars) scalars[prefix + "." + k] = v;
    for (const auto& [k, v] : other.tables) tables[prefix + "." + k] = v;
    for (const auto& [k, v] : other.verdicts) verdicts[prefix + "." + k] = v;
    for (const auto& [k, v] : other.timings_ms) timings_ms[prefix + "." + k] = v;
  }

  /// Under the reproducibility flag wall-clock timings are zeroed so two runs
  /// with the same config and seed serialize byte-identically.
  ordered_json to_json(bool reproducible) const {
    ordered_json j;
    j["artifact_version"] = artifact_version;
    j["config"] = config_echo;
    ordered_json s = ordered_json::object();
    for (const auto& [k, v] : scalars) s[k] = v;
    j["scalars"] = s;
    ordered_json t = ordered_json::object();
    for (const auto& [k, tab] : tables) {
      ordered_json jt;
      jt["columns"] = tab.columns;
      jt["data"] = tab.data;
      t[k] = jt;
    }
    j["tables"] = t;
    ordered_json v = ordered_json::object();
    for (const auto& [k, b] : verdicts) v[k] = b;
    j["verdicts"] = v;
    ordered_json tm = ordered_json::object();
    for (const auto& [k, ms] : timings_ms) tm[k] = reproducible ? 0.0 : ms;
    j["timings_ms"] = tm;
    return j;
  }
};

/// One row of comma-separated values with 17 significant digits.
inline std::string csv_row(const std::vector<double>& vals) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

inline std::string table_to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::vector<double> row;
    row.reserve(t.data.size());
    for (const auto& col : t.data) row.push_back(col[r]);
    out += csv_row(row);
    out += '\n';
  }
  return out;
}

}  // namespace qcc
