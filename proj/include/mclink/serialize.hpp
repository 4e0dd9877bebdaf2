// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/errors.hpp"
#include "mclink/optimizer.hpp"
#include "mclink/simulate.hpp"

namespace mclink {

using json = nlohmann::json;

inline Dimension dimension_from_string(const std::string& s) {
  if (s == "1d") return Dimension::d1;
  if (s == "3d") return Dimension::d3;
  throw ConfigError("dimension: expected \"1d\" or \"3d\", got \"" + s + "\"");
}

inline CountModel count_model_from_string(const std::string& s) {
  if (s == "binomial") return CountModel::binomial;
  if (s == "poisson") return CountModel::poisson;
  if (s == "gaussian") return CountModel::gaussian;
  throw ConfigError("model: expected binomial|poisson|gaussian, got \"" + s + "\"");
}

inline Scenario scenario_from_string(const std::string& s) {
  if (s == "known") return Scenario::known;
  if (s == "unknown-location") return Scenario::unknown_location;
  if (s == "isi") return Scenario::isi;
  throw ConfigError("scenario: expected known|unknown-location|isi, got \"" + s + "\"");
}

namespace detail {

// json field access with field-precise ConfigError diagnostics.
template <typename T>
T get_field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

template <typename T>
T get_field_or(const json& j, const std::string& path, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

}  // namespace detail

inline void to_json(json& j, const LocationBounds& b) {
  j = json{{"a", b.a}, {"b", b.b}};
}

inline void from_json(const json& j, LocationBounds& b) {
  b.a = detail::get_field<double>(j, "LinkConfig.bounds", "a");
  b.b = detail::get_field<double>(j, "LinkConfig.bounds", "b");
}

inline void to_json(json& j, const LinkConfig& c) {
  j = json{{"D", c.D},
           {"d", c.d},
           {"d_I", c.d_I},
           {"r", c.r},
           {"T_b", c.T_b},
           {"N0", c.N0},
           {"N1", c.N1},
           {"dimension", to_string(c.dimension)},
           {"L", c.L},
           {"location_known", c.location_known}};
  if (!c.location_known) j["bounds"] = c.bounds;
}

inline void from_json(const json& j, LinkConfig& c) {
  const std::string path = "LinkConfig";
  c.D = detail::get_field<double>(j, path, "D");
  c.d = detail::get_field<double>(j, path, "d");
  c.d_I = detail::get_field<double>(j, path, "d_I");
  c.r = detail::get_field_or<double>(j, path, "r", 0.0);
  c.T_b = detail::get_field<double>(j, path, "T_b");
  c.N0 = detail::get_field<long long>(j, path, "N0");
  c.N1 = detail::get_field<long long>(j, path, "N1");
  c.dimension =
      dimension_from_string(detail::get_field<std::string>(j, path, "dimension"));
  c.L = detail::get_field_or<int>(j, path, "L", 1);
  c.location_known = detail::get_field_or<bool>(j, path, "location_known", true);
  if (!c.location_known) {
    if (!j.contains("bounds")) throw ConfigError("LinkConfig.bounds: missing");
    c.bounds = j.at("bounds").get<LocationBounds>();
  }
}

// DecisionRule labels are stored run-length encoded: [[bit, count], ...].
inline void to_json(json& j, const DecisionRule& rule) {
  json rle = json::array();
  size_t i = 0;
  while (i < rule.labels.size()) {
    size_t k = i;
    while (k < rule.labels.size() && rule.labels[k] == rule.labels[i]) ++k;
    rle.push_back(json::array({int(rule.labels[i]), (long long)(k - i)}));
    i = k;
  }
  j = json{{"model", to_string(rule.model)},
           {"labels_rle", std::move(rle)},
           {"boundaries", rule.boundaries},
           {"region_bits", rule.region_bits},
           {"degenerate", rule.degenerate}};
}

inline void from_json(const json& j, DecisionRule& rule) {
  const std::string path = "DecisionRule";
  rule.model =
      count_model_from_string(detail::get_field<std::string>(j, path, "model"));
  rule.labels.clear();
  if (!j.contains("labels_rle")) throw ConfigError("DecisionRule.labels_rle: missing");
  for (const auto& run : j.at("labels_rle")) {
    if (!run.is_array() || run.size() != 2)
      throw ConfigError("DecisionRule.labels_rle: runs must be [bit, count] pairs");
    int bit = run[0].get<int>();
    long long count = run[1].get<long long>();
    if ((bit != 0 && bit != 1) || count < 1)
      throw ConfigError("DecisionRule.labels_rle: invalid run");
    rule.labels.insert(rule.labels.end(), size_t(count), std::uint8_t(bit));
  }
  rule.boundaries =
      detail::get_field_or<std::vector<double>>(j, path, "boundaries", {});
  rule.region_bits =
      detail::get_field_or<std::vector<std::uint8_t>>(j, path, "region_bits", {});
  rule.degenerate = detail::get_field_or<bool>(j, path, "degenerate", false);
}

inline void to_json(json& j, const StabilityInterval& iv) {
  j = json{{"t_lo", iv.t_lo},
           {"t_hi", iv.t_hi},
           {"rule", iv.rule},
           {"t_opt", iv.t_opt},
           {"ber_opt", iv.ber_opt}};
}

inline void from_json(const json& j, StabilityInterval& iv) {
  const std::string path = "StabilityInterval";
  iv.t_lo = detail::get_field<double>(j, path, "t_lo");
  iv.t_hi = detail::get_field<double>(j, path, "t_hi");
  if (j.contains("rule")) iv.rule = j.at("rule").get<DecisionRule>();
  iv.t_opt = detail::get_field_or<double>(j, path, "t_opt", iv.t_lo);
  iv.ber_opt = detail::get_field_or<double>(j, path, "ber_opt", 0.0);
}

inline void to_json(json& j, const OptimizationReport& r) {
  j = json{{"algorithm", r.algorithm},
           {"model", to_string(r.model)},
           {"t_star", r.t_star},
           {"ber_star", r.ber_star},
           {"t_star_earliest", r.t_star_earliest},
           {"ber_star_earliest", r.ber_star_earliest},
           {"iterations", r.iterations},
           {"function_evals", r.function_evals},
           {"gradient_evals", r.gradient_evals},
           {"converged", r.converged},
           {"degenerate", r.degenerate},
           {"grid_points", r.grid_points},
           {"intervals", r.intervals}};
}

inline void from_json(const json& j, OptimizationReport& r) {
  const std::string path = "OptimizationReport";
  r.algorithm = detail::get_field<std::string>(j, path, "algorithm");
  r.model = count_model_from_string(detail::get_field<std::string>(j, path, "model"));
  r.t_star = detail::get_field<double>(j, path, "t_star");
  r.ber_star = detail::get_field<double>(j, path, "ber_star");
  r.t_star_earliest = detail::get_field_or<double>(j, path, "t_star_earliest", r.t_star);
  r.ber_star_earliest =
      detail::get_field_or<double>(j, path, "ber_star_earliest", r.ber_star);
  r.iterations = detail::get_field_or<long long>(j, path, "iterations", 0);
  r.function_evals = detail::get_field_or<long long>(j, path, "function_evals", 0);
  r.gradient_evals = detail::get_field_or<long long>(j, path, "gradient_evals", 0);
  r.converged = detail::get_field_or<bool>(j, path, "converged", true);
  r.degenerate = detail::get_field_or<bool>(j, path, "degenerate", false);
  r.grid_points = detail::get_field_or<int>(j, path, "grid_points", 0);
  r.intervals.clear();
  if (j.contains("intervals"))
    for (const auto& iv : j.at("intervals"))
      r.intervals.push_back(iv.get<StabilityInterval>());
}

inline void to_json(json& j, const SimEstimate& e) {
  j = json{{"estimate", e.estimate},
           {"std_error", e.std_error},
           {"trials", e.trials},
           {"errors", e.errors},
           {"seed", e.seed}};
}

inline void from_json(const json& j, SimEstimate& e) {
  const std::string path = "SimEstimate";
  e.estimate = detail::get_field<double>(j, path, "estimate");
  e.std_error = detail::get_field<double>(j, path, "std_error");
  e.trials = detail::get_field<long long>(j, path, "trials");
  e.errors = detail::get_field_or<long long>(j, path, "errors", 0);
  e.seed = detail::get_field_or<std::uint64_t>(j, path, "seed", 0);
}

// Numeric result table: one named column set, all-double rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const Table& a, const Table& b) {
    return a.columns == b.columns && a.rows == b.rows;
  }
};

inline void to_json(json& j, const Table& t) {
  j = json{{"columns", t.columns}, {"rows", t.rows}};
}

inline void from_json(const json& j, Table& t) {
  t.columns = detail::get_field<std::vector<std::string>>(j, "Table", "columns");
  t.rows.clear();
  if (!j.contains("rows")) throw ConfigError("Table.rows: missing");
  for (const auto& row : j.at("rows"))
    t.rows.push_back(row.get<std::vector<double>>());
  for (const auto& row : t.rows)
    if (row.size() != t.columns.size())
      throw ConfigError("Table.rows: row width does not match columns");
}

// One CSV cell with 10 significant digits (trailing zeros elided).
inline std::string csv_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// CSV: one header line, then rows in order, 10 significant digits per cell.
inline void write_csv(std::ostream& os, const Table& t) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
}

}  // namespace mclink
