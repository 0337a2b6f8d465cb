#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <memory>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rabi/errors.hpp"
#include "rabi/fockspace.hpp"
#include "rabi/io.hpp"
#include "rabi/oracle.hpp"
#include "rabi/reservoir.hpp"
#include "rabi/resonance.hpp"

namespace rabi::cli {

using io::Json;

struct Violation {
  std::string path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Either an explicit list or start/stop/step (inclusive of stop).
struct GridSpec {
  std::vector<double> list;
  double start = 0, stop = 0, step = 0;
  bool ranged = false;
};

inline constexpr std::size_t kMaxGridPoints = 100000;
inline constexpr std::uint32_t kMaxOracleNMax = 200;
inline constexpr std::uint32_t kMaxBlocks = 500;
inline constexpr std::uint32_t kMaxDarkIndex = 100;
inline constexpr std::uint32_t kMaxQuasiIndex = 60;
inline constexpr unsigned kMaxJobs = 256;

inline std::vector<double> expand(const GridSpec& g) {
  if (!g.ranged) return g.list;
  std::vector<double> out;
  const double span = (g.stop - g.start) / g.step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) out.push_back(g.start + static_cast<double>(i) * g.step);
  return out;
}

struct RunConfig {
  std::string command;
  std::string preset;
  std::string format = "csv";
  std::string out;
  unsigned jobs = 1;
  double threshold = 0.1;
  std::string scan = "lambda2";
  std::string mode = "approx";

  std::optional<double> omega, delta1, delta2, g1, g2;
  std::optional<double> omega1, V, g1p, g2p, gamma, omega_c;
  std::optional<GridSpec> omega_grid, delta2_grid, g2_grid, g1_grid;

  std::uint32_t n_max = kDefaultOracleNMax;
  std::uint32_t n_blocks = kDefaultBlocks;
  std::uint32_t n_levels = 6;
  std::uint32_t m = 1, n = 1;
  std::uint32_t dark_m_max = 4, dark_n_max = 4;

  /// Merged configuration as resolved from preset, file and flags.
  Json resolved = Json::object();
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"lambda",         "design",         "scan-window",    "spectrum",
                                          "oracle-compare", "reservoir-dark", "reservoir-quasi"};
  return c;
}

namespace detail {

inline const std::vector<std::string>& number_keys() {
  static const std::vector<std::string> k{"omega",  "delta1", "delta2", "g1",    "g2",     "omega1",
                                          "V",      "g1p",    "g2p",    "gamma", "omega_c", "threshold"};
  return k;
}
inline const std::vector<std::string>& integer_keys() {
  static const std::vector<std::string> k{"jobs", "n_max", "n_blocks", "n_levels", "m", "n", "dark_m_max", "dark_n_max"};
  return k;
}
inline const std::vector<std::string>& string_keys() {
  static const std::vector<std::string> k{"command", "preset", "format", "out", "scan", "mode"};
  return k;
}
inline const std::vector<std::string>& grid_keys() {
  static const std::vector<std::string> k{"omega_grid", "delta2_grid", "g2_grid", "g1_grid"};
  return k;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

inline Json range(double start, double stop, double step) {
  return Json{{"start", start}, {"stop", stop}, {"step", step}};
}

}  // namespace detail

/// Published parameter grids. Each preset names the command it feeds.
inline const std::map<std::string, Json>& presets() {
  static const std::map<std::string, Json> p = [] {
    using detail::range;
    std::map<std::string, Json> m;
    const Json g2 = range(0.1, 1.0, 0.05);
    m["fig1a"] = Json{{"command", "scan-window"}, {"scan", "lambda2"}, {"omega_grid", {1.0}},
                      {"delta2_grid", {1.0, 1.5, 2.0, 2.5}}, {"g2_grid", g2}};
    m["fig1b"] = Json{{"command", "scan-window"}, {"scan", "lambda2"}, {"omega_grid", {0.5, 1.0, 1.5}},
                      {"delta2_grid", {2.0}}, {"g2_grid", g2}};
    m["fig2a"] = Json{{"command", "scan-window"}, {"scan", "delta1"}, {"g1", 0.9}, {"omega_grid", {1.0}},
                      {"delta2_grid", {1.0, 1.5, 2.0, 2.5}}, {"g2_grid", g2}};
    m["fig2b"] = Json{{"command", "scan-window"}, {"scan", "delta1"}, {"g1", 0.9}, {"omega_grid", {0.5, 1.0, 1.5}},
                      {"delta2_grid", {2.0}}, {"g2_grid", g2}};
    m["fig3"] = Json{{"command", "spectrum"}, {"omega", 1.0},     {"delta2", 2.0},   {"g2", 0.7},
                     {"g1_grid", range(0.1, 1.0, 0.05)}, {"n_blocks", 8}, {"mode", "approx"}};
    m["reference-point"] = Json{{"command", "design"}, {"omega", 1.0}, {"delta2", 2.0}, {"g2", 0.7}, {"g1", 0.9}};
    m["reference-compare"] = Json{{"command", "oracle-compare"}, {"omega", 1.0}, {"delta2", 2.0}, {"g2", 0.7},
                              {"g1", 0.9}, {"n_levels", 6}, {"n_max", 60}, {"n_blocks", 8}};
    m["dark-symmetric"] = Json{{"command", "reservoir-dark"}, {"omega", 1.0}, {"omega1", 0.8}, {"V", 0.0},
                               {"g1", 0.3}, {"g2", 0.3}, {"g1p", 0.2}, {"g2p", 0.2}, {"delta1", 1.0},
                               {"delta2", 1.0}, {"dark_m_max", 4}, {"dark_n_max", 4}};
    m["quasi-symmetric"] = Json{{"command", "reservoir-quasi"}, {"omega", 1.0}, {"omega1", 0.8}, {"V", 0.0},
                                {"g1", 0.3}, {"g2", 0.3}, {"g1p", 0.2}, {"g2p", 0.2}, {"delta1", 1.0},
                                {"delta2", 1.0}, {"m", 1}, {"n", 1}};
    return m;
  }();
  return p;
}

/// Parses "a:b:step" or "v1,v2,..." into the JSON grid form.
inline std::optional<Json> parse_grid_text(const std::string& text) {
  auto number = [](const std::string& s) -> std::optional<double> {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) return std::nullopt;
    const auto a = number(parts[0]), b = number(parts[1]), c = number(parts[2]);
    if (!a || !b || !c) return std::nullopt;
    return detail::range(*a, *b, *c);
  }
  Json arr = Json::array();
  for (const auto& part : split(text, ',')) {
    const auto v = number(part);
    if (!v) return std::nullopt;
    arr.push_back(*v);
  }
  return arr;
}

/// Typed view of a merged configuration. Type errors and unknown keys
/// become violations; range checks are left to validate().
inline RunConfig from_json(const Json& j, std::vector<Violation>& errs) {
  RunConfig c;
  c.resolved = j;
  if (!j.is_object()) {
    errs.push_back({"", "configuration must be a JSON object"});
    return c;
  }
  for (const auto& [key, val] : j.items()) {
    if (detail::contains(detail::number_keys(), key)) {
      if (!val.is_number()) {
        errs.push_back({key, "must be a number"});
        continue;
      }
      const double v = val.get<double>();
      if (key == "omega") c.omega = v;
      else if (key == "delta1") c.delta1 = v;
      else if (key == "delta2") c.delta2 = v;
      else if (key == "g1") c.g1 = v;
      else if (key == "g2") c.g2 = v;
      else if (key == "omega1") c.omega1 = v;
      else if (key == "V") c.V = v;
      else if (key == "g1p") c.g1p = v;
      else if (key == "g2p") c.g2p = v;
      else if (key == "gamma") c.gamma = v;
      else if (key == "omega_c") c.omega_c = v;
      else if (key == "threshold") c.threshold = v;
    } else if (detail::contains(detail::integer_keys(), key)) {
      if (!val.is_number_integer() || val.get<std::int64_t>() < 0 || val.get<std::int64_t>() > 1000000) {
        errs.push_back({key, "must be a non-negative integer"});
        continue;
      }
      const auto v = val.get<std::uint32_t>();
      if (key == "jobs") c.jobs = v;
      else if (key == "n_max") c.n_max = v;
      else if (key == "n_blocks") c.n_blocks = v;
      else if (key == "n_levels") c.n_levels = v;
      else if (key == "m") c.m = v;
      else if (key == "n") c.n = v;
      else if (key == "dark_m_max") c.dark_m_max = v;
      else if (key == "dark_n_max") c.dark_n_max = v;
    } else if (detail::contains(detail::string_keys(), key)) {
      if (!val.is_string()) {
        errs.push_back({key, "must be a string"});
        continue;
      }
      const auto v = val.get<std::string>();
      if (key == "command") c.command = v;
      else if (key == "preset") c.preset = v;
      else if (key == "format") c.format = v;
      else if (key == "out") c.out = v;
      else if (key == "scan") c.scan = v;
      else if (key == "mode") c.mode = v;
    } else if (detail::contains(detail::grid_keys(), key)) {
      GridSpec g;
      bool ok = true;
      if (val.is_array()) {
        for (const auto& x : val) {
          if (!x.is_number()) ok = false;
          else g.list.push_back(x.get<double>());
        }
      } else if (val.is_object()) {
        g.ranged = true;
        for (const char* f : {"start", "stop", "step"}) {
          if (!val.contains(f) || !val[f].is_number()) {
            errs.push_back({key + "." + f, "must be a number"});
            ok = false;
          }
        }
        for (const auto& [gk, gv] : val.items()) {
          (void)gv;
          if (gk != "start" && gk != "stop" && gk != "step") errs.push_back({key + "." + gk, "unknown field"});
        }
        if (ok) {
          g.start = val["start"].get<double>();
          g.stop = val["stop"].get<double>();
          g.step = val["step"].get<double>();
        }
      } else {
        ok = false;
      }
      if (!ok) {
        if (!val.is_object()) errs.push_back({key, "must be a number list or {start, stop, step}"});
        continue;
      }
      if (key == "omega_grid") c.omega_grid = g;
      else if (key == "delta2_grid") c.delta2_grid = g;
      else if (key == "g2_grid") c.g2_grid = g;
      else if (key == "g1_grid") c.g1_grid = g;
    } else {
      errs.push_back({key, "unknown field"});
    }
  }
  return c;
}

namespace detail {

inline void check_grid(std::vector<Violation>& out, const std::optional<GridSpec>& g, const std::string& name,
                       bool allow_zero) {
  if (!g) {
    out.push_back({name, "required"});
    return;
  }
  if (g->ranged) {
    if (!std::isfinite(g->start) || !std::isfinite(g->stop) || !std::isfinite(g->step)) {
      out.push_back({name, "start, stop and step must be finite"});
      return;
    }
    if (!(g->step > 0)) {
      out.push_back({name + ".step", "must be > 0"});
      return;
    }
    if (g->stop < g->start) {
      out.push_back({name + ".stop", "must be >= start"});
      return;
    }
    if ((g->stop - g->start) / g->step >= static_cast<double>(kMaxGridPoints)) {
      out.push_back({name, "more than " + std::to_string(kMaxGridPoints) + " points"});
      return;
    }
  } else if (g->list.size() > kMaxGridPoints) {
    out.push_back({name, "more than " + std::to_string(kMaxGridPoints) + " points"});
    return;
  }
  const auto v = expand(*g);
  if (v.empty()) {
    out.push_back({name, "must be nonempty"});
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      out.push_back({name, "values must be finite"});
      return;
    }
    if (allow_zero ? v[i] < 0 : v[i] <= 0) {
      out.push_back({name, allow_zero ? "values must be >= 0" : "values must be > 0"});
      return;
    }
    if (i > 0 && !(v[i] > v[i - 1])) {
      out.push_back({name, "values must be strictly increasing"});
      return;
    }
  }
}

enum class Bound { positive, nonnegative };

inline void check_value(std::vector<Violation>& out, const std::optional<double>& v, const std::string& name,
                        Bound bound, const std::string& owner) {
  if (!v) {
    out.push_back({name, "required"});
    return;
  }
  if (!std::isfinite(*v)) {
    out.push_back({name, "must be finite"});
    return;
  }
  if (bound == Bound::positive && !(*v > 0)) out.push_back({name, owner + ": must be > 0"});
  if (bound == Bound::nonnegative && *v < 0) out.push_back({name, owner + ": must be >= 0"});
}

inline void check_reservoir(std::vector<Violation>& out, const RunConfig& c) {
  check_value(out, c.omega, "omega", Bound::positive, "ReservoirParams");
  check_value(out, c.omega1, "omega1", Bound::positive, "ReservoirParams");
  for (auto [v, name] : {std::pair{&c.V, "V"}, {&c.g1, "g1"}, {&c.g2, "g2"}, {&c.g1p, "g1p"}, {&c.g2p, "g2p"},
                         {&c.delta1, "delta1"}, {&c.delta2, "delta2"}})
    check_value(out, *v, name, Bound::nonnegative, "ReservoirParams");
  if (c.gamma) check_value(out, c.gamma, "gamma", Bound::positive, "ReservoirParams");
  if (c.omega_c && !std::isfinite(*c.omega_c)) out.push_back({"omega_c", "must be finite"});
}

}  // namespace detail

/// Every violated invariant with its field path; empty when runnable.
inline std::vector<Violation> validate(const RunConfig& c) {
  using detail::Bound;
  using detail::check_grid;
  using detail::check_value;
  std::vector<Violation> out;
  if (!detail::contains(commands(), c.command)) out.push_back({"command", "unknown command '" + c.command + "'"});
  if (!c.preset.empty()) {
    const auto it = presets().find(c.preset);
    if (it == presets().end())
      out.push_back({"preset", "unknown preset '" + c.preset + "'"});
    else if (it->second["command"].get<std::string>() != c.command)
      out.push_back({"preset", "preset '" + c.preset + "' belongs to command '" +
                                   it->second["command"].get<std::string>() + "'"});
  }
  if (c.format != "csv" && c.format != "json") out.push_back({"format", "must be 'csv' or 'json'"});
  if (c.jobs < 1 || c.jobs > kMaxJobs) out.push_back({"jobs", "must be in [1, " + std::to_string(kMaxJobs) + "]"});

  const std::string& cmd = c.command;
  if (cmd == "lambda") {
    check_value(out, c.omega, "omega", Bound::positive, "ModelParams");
    const bool q1 = c.delta1 || c.g1;
    const bool q2 = c.delta2 || c.g2;
    if (!q1 && !q2) out.push_back({"g1", "give (delta1, g1) and/or (delta2, g2)"});
    if (q1) {
      check_value(out, c.delta1, "delta1", Bound::nonnegative, "ModelParams");
      check_value(out, c.g1, "g1", Bound::nonnegative, "ModelParams");
    }
    if (q2) {
      check_value(out, c.delta2, "delta2", Bound::nonnegative, "ModelParams");
      check_value(out, c.g2, "g2", Bound::nonnegative, "ModelParams");
    }
  } else if (cmd == "design" || cmd == "oracle-compare") {
    check_value(out, c.omega, "omega", Bound::positive, "ModelParams");
    check_value(out, c.delta2, "delta2", Bound::positive, "ModelParams");
    check_value(out, c.g2, "g2", Bound::nonnegative, "ModelParams");
    check_value(out, c.g1, "g1", Bound::nonnegative, "ModelParams");
    if (cmd == "oracle-compare") {
      if (c.n_max < 4 || c.n_max > kMaxOracleNMax)
        out.push_back({"n_max", "must be in [4, " + std::to_string(kMaxOracleNMax) + "]"});
      if (c.n_levels < 1 || c.n_levels > 2 * c.n_max) out.push_back({"n_levels", "must be in [1, 2 n_max]"});
      if (c.n_blocks < 1 || c.n_blocks > kMaxBlocks)
        out.push_back({"n_blocks", "must be in [1, " + std::to_string(kMaxBlocks) + "]"});
    }
  } else if (cmd == "scan-window") {
    if (c.scan != "lambda2" && c.scan != "delta1") out.push_back({"scan", "must be 'lambda2' or 'delta1'"});
    check_grid(out, c.omega_grid, "omega_grid", false);
    check_grid(out, c.delta2_grid, "delta2_grid", c.scan == "lambda2");
    check_grid(out, c.g2_grid, "g2_grid", true);
    if (c.scan == "delta1") check_value(out, c.g1, "g1", Bound::nonnegative, "ModelParams");
    if (!(c.threshold > 0) || !std::isfinite(c.threshold)) out.push_back({"threshold", "must be finite and > 0"});
  } else if (cmd == "spectrum") {
    check_value(out, c.omega, "omega", Bound::positive, "ModelParams");
    check_value(out, c.delta2, "delta2", Bound::positive, "ModelParams");
    check_value(out, c.g2, "g2", Bound::positive, "ModelParams");
    check_grid(out, c.g1_grid, "g1_grid", false);
    if (c.n_blocks < 1 || c.n_blocks > kMaxBlocks)
      out.push_back({"n_blocks", "must be in [1, " + std::to_string(kMaxBlocks) + "]"});
    if (c.mode != "approx" && c.mode != "exact") out.push_back({"mode", "must be 'approx' or 'exact'"});
  } else if (cmd == "reservoir-dark") {
    detail::check_reservoir(out, c);
    if (c.dark_m_max > kMaxDarkIndex) out.push_back({"dark_m_max", "must be <= " + std::to_string(kMaxDarkIndex)});
    if (c.dark_n_max > kMaxDarkIndex) out.push_back({"dark_n_max", "must be <= " + std::to_string(kMaxDarkIndex)});
  } else if (cmd == "reservoir-quasi") {
    detail::check_reservoir(out, c);
    if (c.m + c.n < 2 || (c.m + c.n) % 2 != 0) out.push_back({"m", "m + n must be even and >= 2"});
    if (c.m > kMaxQuasiIndex || c.n > kMaxQuasiIndex)
      out.push_back({"m", "m and n must be <= " + std::to_string(kMaxQuasiIndex)});
  }
  return out;
}

/// Result of executing a configuration: text to emit and exit status.
struct Output {
  std::string text;
  int status = 0;
};

namespace detail {

inline ModelParams model_of(const RunConfig& c) {
  ModelParams p;
  p.omega = c.omega.value_or(1.0);
  p.delta1 = c.delta1.value_or(0.0);
  p.delta2 = c.delta2.value_or(0.0);
  p.g1 = c.g1.value_or(0.0);
  p.g2 = c.g2.value_or(0.0);
  return p;
}

inline ReservoirParams reservoir_of(const RunConfig& c) {
  ReservoirParams r;
  r.omega = c.omega.value_or(1.0);
  r.omega1 = c.omega1.value_or(1.0);
  r.V = c.V.value_or(0.0);
  r.g1 = c.g1.value_or(0.0);
  r.g2 = c.g2.value_or(0.0);
  r.g1p = c.g1p.value_or(0.0);
  r.g2p = c.g2p.value_or(0.0);
  r.delta1 = c.delta1.value_or(0.0);
  r.delta2 = c.delta2.value_or(0.0);
  r.gamma = c.gamma.value_or(1.0);
  r.omega_c = c.omega_c.value_or(0.0);
  return r;
}

/// One-row table from a flat JSON object.
inline io::Table single_row(const Json& obj) {
  io::Table t;
  std::vector<io::Cell> row;
  for (const auto& [k, v] : obj.items()) {
    t.columns.push_back(k);
    if (v.is_null()) row.emplace_back(std::monostate{});
    else if (v.is_boolean()) row.emplace_back(v.get<bool>());
    else if (v.is_number_integer()) row.emplace_back(v.get<std::int64_t>());
    else if (v.is_number()) row.emplace_back(v.get<double>());
    else row.emplace_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  t.rows.push_back(std::move(row));
  return t;
}

inline std::string emit(const RunConfig& c, const io::Json& header, const io::Table& table, Json extra = Json::object()) {
  if (c.format == "csv") return io::to_csv(table, header);
  Json doc;
  doc["header"] = header;
  doc["rows"] = io::rows_json(table);
  for (auto& [k, v] : extra.items()) doc[k] = v;
  return io::dump_json(doc) + "\n";
}

inline io::Table residual_table(const std::vector<DiscrepancyReport>& reports) {
  io::Table t{{"report", "name", "value"}, {}};
  for (const auto& r : reports)
    for (const auto& nv : r.residuals) t.rows.push_back({r.label, nv.name, nv.value});
  return t;
}

}  // namespace detail

/// Configuration recorded in output headers: everything except the
/// worker count and the output path, which do not change results.
inline Json header_config(const RunConfig& c) {
  Json j = c.resolved;
  j.erase("jobs");
  j.erase("out");
  return j;
}

/// Runs a validated configuration. Numerical failures of single-point
/// commands give status 2 and an error record as the text.
inline Output execute(const RunConfig& c) {
  const Json header = io::header_record(header_config(c));
  try {
    const std::string& cmd = c.command;
    if (cmd == "lambda") {
      io::Table t{{"qubit", "omega", "delta", "g", "lambda", "residual"}, {}};
      if (c.delta1 || c.g1) {
        const double l = solve_lambda1(*c.omega, *c.delta1, *c.g1);
        t.rows.push_back({std::int64_t{1}, *c.omega, *c.delta1, *c.g1, l, residual_eq8(*c.omega, *c.delta1, *c.g1, l)});
      }
      if (c.delta2 || c.g2) {
        const double l = solve_lambda2(*c.omega, *c.delta2, *c.g2);
        t.rows.push_back({std::int64_t{2}, *c.omega, *c.delta2, *c.g2, l, residual_eq9(*c.omega, *c.delta2, *c.g2, l)});
      }
      return {detail::emit(c, header, t), 0};
    }
    if (cmd == "design") {
      const auto d = design_resonant(*c.omega, *c.delta2, *c.g2, *c.g1);
      if (c.format == "csv") return {io::to_csv(detail::single_row(io::to_json(d)), header), 0};
      Json doc;
      doc["header"] = header;
      doc["design"] = io::to_json(d);
      return {io::dump_json(doc) + "\n", 0};
    }
    if (cmd == "scan-window") {
      const auto omegas = expand(*c.omega_grid);
      const auto deltas = expand(*c.delta2_grid);
      const auto g2s = expand(*c.g2_grid);
      const auto rows = c.scan == "lambda2" ? scan_lambda2_window(omegas, deltas, g2s, c.threshold, c.jobs)
                                            : scan_delta1_window(omegas, deltas, *c.g1, g2s, c.threshold, c.jobs);
      Json extra;
      Json windows = Json::array();
      for (const auto& s : summarize_windows(rows)) windows.push_back(io::to_json(s));
      extra["windows"] = windows;
      extra["reference_windows"] = Json{{"g2", kReferenceG2Window}, {"delta1", kReferenceDelta1Window}};
      return {detail::emit(c, header, io::to_table(rows), extra), 0};
    }
    if (cmd == "spectrum") {
      const auto mode = c.mode == "exact" ? CoefficientMode::exact : CoefficientMode::approx;
      const auto table = spectrum_vs_g1(*c.omega, *c.delta2, *c.g2, expand(*c.g1_grid), c.n_blocks, mode, c.jobs);
      return {detail::emit(c, header, io::to_table(table)), 0};
    }
    if (cmd == "oracle-compare") {
      const auto cmp = compare_trwa_exact(*c.omega, *c.delta2, *c.g2, *c.g1, c.n_levels, c.n_max, c.n_blocks);
      Json extra;
      extra["design"] = io::to_json(cmp.design);
      extra["trwa_ground"] = cmp.trwa_ground;
      extra["exact_ground"] = cmp.exact_ground;
      extra["max_abs_dev"] = cmp.max_abs_dev();
      extra["convergence"] = io::to_json(cmp.convergence);
      return {detail::emit(c, header, io::to_table(cmp.rows), extra), 0};
    }
    if (cmd == "reservoir-dark") {
      const ReservoirParams r = detail::reservoir_of(c);
      std::vector<DarkStateReport> reports;
      for (std::uint32_t m = 0; m <= c.dark_m_max; ++m)
        for (std::uint32_t n = 0; n <= c.dark_n_max; ++n) reports.push_back(dark_state_report(r, m, n));
      return {detail::emit(c, header, io::to_table(reports)), 0};
    }
    if (cmd == "reservoir-quasi") {
      const ReservoirParams r = detail::reservoir_of(c);
      const auto coeffs = compute_K(r);
      const auto quasi = quasi_exact_subspace(r, c.m, c.n);
      std::vector<DiscrepancyReport> reports{quasi.report, verify_eq24(r),
                                             compare_window(r, std::max(c.m, 1u), std::max(c.n, 1u),
                                                            WindowTranscription::corrected),
                                             compare_window(r, std::max(c.m, 1u), std::max(c.n, 1u),
                                                            WindowTranscription::verbatim)};
      Json extra;
      extra["coefficients"] = Json{{"eta1", coeffs.eta1},       {"eta2", coeffs.eta2}, {"lambda1", coeffs.lambda1},
                                   {"lambda2", coeffs.lambda2}, {"K1", coeffs.K1},     {"K2", coeffs.K2},
                                   {"offset", coeffs.offset}};
      Json reps = Json::array();
      for (const auto& rep : reports) reps.push_back(io::to_json(rep));
      extra["reports"] = reps;
      return {detail::emit(c, header, detail::residual_table(reports), extra), 0};
    }
    return {"", 1};
  } catch (const Error& e) {
    Json doc = io::error_record(e);
    doc["header"] = header;
    return {io::dump_json(doc) + "\n", e.kind() == ErrorKind::validation ? 1 : 2};
  }
}

inline Json load_json_file(const std::string& path, std::vector<Violation>& errs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    errs.push_back({"config", "cannot open '" + path + "'"});
    return Json::object();
  }
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    errs.push_back({"config", std::string("invalid JSON: ") + e.what()});
    return Json::object();
  }
}

/// Layers preset, config file and flags (later wins) into one object.
inline Json merge_layers(const std::string& command, const std::string& preset, const Json& file, const Json& flags,
                         std::optional<unsigned> env_jobs) {
  Json merged = Json::object();
  merged["command"] = command;
  if (env_jobs) merged["jobs"] = *env_jobs;
  if (!preset.empty()) {
    const auto it = presets().find(preset);
    if (it != presets().end())
      for (const auto& [k, v] : it->second.items())
        if (k != "command") merged[k] = v;
    merged["preset"] = preset;
  }
  for (const auto& [k, v] : file.items())
    if (k != "command") merged[k] = v;
  for (const auto& [k, v] : flags.items()) merged[k] = v;
  if (file.contains("command") && file["command"] != command) merged["command"] = file["command"];
  return merged;
}

inline std::optional<unsigned> env_jobs() {
  const char* s = std::getenv("RABI_SPECTRA_JOBS");
  if (!s || !*s) return std::nullopt;
  unsigned v = 0;
  const auto res = std::from_chars(s, s + std::strlen(s), v);
  if (res.ec != std::errc() || *res.ptr != '\0') return std::nullopt;
  return v;
}

inline int write_output(const Output& o, const RunConfig& c) {
  if (c.out.empty()) {
    std::cout << o.text << std::flush;
    return o.status;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    std::cerr << "out: cannot open '" << c.out << "' for writing\n";
    return 1;
  }
  f << o.text;
  if (o.status != 0) std::cerr << o.text;
  return o.status;
}

/// Entry point of the rabi_spectra executable.
inline int main(int argc, char** argv) {
  CLI::App app{"Exceptional spectra of the two-qubit quantum Rabi model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Flag {
    std::string key;
    CLI::Option* opt = nullptr;
    std::string text;
  };
  struct Sub {
    CLI::App* app = nullptr;
    std::vector<std::unique_ptr<Flag>> flags;
    std::string config, preset, fig;
  };
  std::map<std::string, Sub> subs;

  const std::map<std::string, std::vector<std::string>> keys{
      {"lambda", {"omega", "delta1", "g1", "delta2", "g2"}},
      {"design", {"omega", "delta2", "g2", "g1"}},
      {"scan-window", {"scan", "omega_grid", "delta2_grid", "g2_grid", "g1", "threshold"}},
      {"spectrum", {"omega", "delta2", "g2", "g1_grid", "n_blocks", "mode"}},
      {"oracle-compare", {"omega", "delta2", "g2", "g1", "n_levels", "n_max", "n_blocks"}},
      {"reservoir-dark",
       {"omega", "omega1", "V", "g1", "g2", "g1p", "g2p", "delta1", "delta2", "gamma", "omega_c", "dark_m_max",
        "dark_n_max"}},
      {"reservoir-quasi",
       {"omega", "omega1", "V", "g1", "g2", "g1p", "g2p", "delta1", "delta2", "gamma", "omega_c", "m", "n"}},
  };
  const std::map<std::string, std::string> descriptions{
      {"lambda", "Solve the displacement conditions for lambda1 and/or lambda2"},
      {"design", "Resonant design: lambda2, lambda1 and delta1 from (omega, delta2, g2, g1)"},
      {"scan-window", "Working-window scans of lambda2 or delta1"},
      {"spectrum", "Resonant-state block spectrum versus g1"},
      {"oracle-compare", "Block spectrum against exact diagonalization"},
      {"reservoir-dark", "Dark-state residuals over an (m, n) grid"},
      {"reservoir-quasi", "Quasi-exact subspace and six-state example reports"},
  };

  for (const auto& cmd : commands()) {
    Sub& s = subs[cmd];
    s.app = app.add_subcommand(cmd, descriptions.at(cmd));
    s.app->add_option("--config", s.config, "JSON configuration file");
    s.app->add_option("--preset", s.preset, "Named parameter preset");
    if (cmd == "scan-window") s.app->add_option("--fig", s.fig, "Figure preset: 1a, 1b, 2a or 2b");
    auto common = keys.at(cmd);
    for (const char* k : {"format", "out", "jobs"}) common.emplace_back(k);
    for (const auto& key : common) {
      auto f = std::make_unique<Flag>();
      f->key = key;
      std::string name = "--" + key;
      std::replace(name.begin(), name.end(), '_', '-');
      f->opt = s.app->add_option(name, f->text);
      s.flags.push_back(std::move(f));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& [cmd, s] : subs) {
    if (!s.app->parsed()) continue;
    std::vector<Violation> errs;
    Json flags = Json::object();
    for (const auto& f : s.flags) {
      if (f->opt->count() == 0) continue;
      const std::string& k = f->key;
      if (detail::contains(detail::string_keys(), k)) {
        flags[k] = f->text;
      } else if (detail::contains(detail::grid_keys(), k)) {
        const auto g = parse_grid_text(f->text);
        if (g) flags[k] = *g;
        else errs.push_back({k, "expected start:stop:step or a comma list"});
      } else if (detail::contains(detail::integer_keys(), k)) {
        std::int64_t v = 0;
        const auto res = std::from_chars(f->text.data(), f->text.data() + f->text.size(), v);
        if (res.ec == std::errc() && res.ptr == f->text.data() + f->text.size()) flags[k] = v;
        else errs.push_back({k, "must be an integer"});
      } else {
        double v = 0;
        const auto res = std::from_chars(f->text.data(), f->text.data() + f->text.size(), v);
        if (res.ec == std::errc() && res.ptr == f->text.data() + f->text.size()) flags[k] = v;
        else errs.push_back({k, "must be a number"});
      }
    }
    std::string preset = s.preset;
    if (!s.fig.empty()) preset = "fig" + s.fig;
    const Json file = s.config.empty() ? Json::object() : load_json_file(s.config, errs);
    const Json merged = merge_layers(cmd, preset, file, flags, env_jobs());
    RunConfig config = from_json(merged, errs);
    for (auto& v : validate(config)) errs.push_back(std::move(v));
    if (!errs.empty()) {
      for (const auto& v : errs) std::cerr << (v.path.empty() ? "config" : v.path) << ": " << v.message << "\n";
      return 1;
    }
    return write_output(execute(config), config);
  }
  return 1;
}

}  // namespace rabi::cli
