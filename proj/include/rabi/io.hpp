#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rabi/errors.hpp"
#include "rabi/fockspace.hpp"
#include "rabi/oracle.hpp"
#include "rabi/reservoir.hpp"
#include "rabi/resonance.hpp"
#include "rabi/version.hpp"

namespace rabi::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits, '.' separator, independent of locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline void dump_string(std::ostream& os, const std::string& s) {
  os << Json(s).dump();
}

inline void dump(std::ostream& os, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        dump_string(os, key);
        os << (indent < 0 ? ":" : ": ");
        dump(os, val, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& val : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        dump(os, val, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_number(v);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// JSON text with every float at 17 significant digits. indent < 0 gives
/// a single line.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump(os, j, indent, 0);
  return os.str();
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

template <class T>
Cell cell(const std::optional<T>& v) {
  if (!v) return std::monostate{};
  if constexpr (std::is_floating_point_v<T>)
    return static_cast<double>(*v);
  else
    return static_cast<std::int64_t>(*v);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string csv_field(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline Json json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

/// Header record: artifact version plus the resolved configuration.
inline Json header_record(const Json& config) {
  Json h;
  h["artifact"] = "rabi_spectra";
  h["version"] = kVersion;
  h["config"] = config;
  return h;
}

/// "# <header json>" line, the column row, then one line per row; LF only.
inline std::string to_csv(const Table& t, const Json& header) {
  std::string out = "# " + dump_json(header, -1) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline Json rows_json(const Table& t) {
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Module serializations

inline Table to_table(const std::vector<WindowScanRow>& rows) {
  Table t{{"omega", "delta2", "g2", "g1", "lambda1", "lambda2", "delta1", "in_window", "error"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.omega, r.delta2, r.g2, cell(r.g1), cell(r.lambda1), cell(r.lambda2), cell(r.delta1),
                      r.in_window, r.error.empty() ? Cell{} : Cell{r.error}});
  return t;
}

inline Table to_table(const SpectrumTable& rows) {
  Table t{{"g1", "delta1", "lambda1", "lambda2", "parity", "level_index", "energy", "offset", "error"}, {}};
  for (const auto& r : rows) {
    Cell parity = r.parity ? Cell{std::string(1, symbol(*r.parity))} : Cell{};
    t.rows.push_back({r.g1, cell(r.delta1), cell(r.lambda1), cell(r.lambda2), parity, cell(r.level_index),
                      cell(r.energy), cell(r.offset), r.error.empty() ? Cell{} : Cell{r.error}});
  }
  return t;
}

inline Table to_table(const std::vector<DeviationRow>& rows) {
  Table t{{"level_index", "e_trwa", "e_exact", "abs_dev", "rel_dev"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({static_cast<std::int64_t>(r.level_index), r.e_trwa, r.e_exact, r.abs_dev, r.rel_dev});
  return t;
}

inline Json to_json(const ResonantDesign& d) {
  Json j;
  j["omega"] = d.omega;
  j["delta2"] = d.delta2;
  j["g2"] = d.g2;
  j["g1"] = d.g1;
  j["lambda1"] = d.lambda1;
  j["lambda2"] = d.lambda2;
  j["delta1"] = d.delta1;
  j["residual_eq8"] = d.residuals[0];
  j["residual_eq9"] = d.residuals[1];
  j["residual_resonance"] = d.residuals[2];
  j["residual_tolerance"] = d.residual_tolerance();
  j["approx_valid"] = d.approx_valid();
  j["physical"] = d.physical();
  return j;
}

inline Json to_json(const ConvergenceReport& c) {
  Json j;
  j["n_levels"] = c.n_levels;
  j["n_max"] = c.n_max;
  j["n_max_reference"] = c.n_max_reference;
  j["deltas"] = c.deltas;
  j["max_delta"] = c.max_delta;
  j["tolerance"] = c.tolerance;
  j["converged"] = c.converged;
  return j;
}

inline Json to_json(const WindowSummary& s) {
  Json j;
  j["omega"] = s.omega;
  j["delta2"] = s.delta2;
  j["points"] = s.points;
  j["in_window"] = s.in_window;
  j["failed"] = s.failed;
  j["g2_min"] = opt(s.g2_min);
  j["g2_max"] = opt(s.g2_max);
  j["delta1_min"] = opt(s.delta1_min);
  j["delta1_max"] = opt(s.delta1_max);
  return j;
}

inline Json to_json(const DiscrepancyReport& r) {
  Json j;
  j["label"] = r.label;
  j["basis"] = r.basis;
  Json res = Json::object();
  for (const auto& nv : r.residuals) res[nv.name] = nv.value;
  j["residuals"] = res;
  Json mm = Json::array();
  for (const auto& m : r.mismatches) {
    Json e;
    e["row"] = m.row;
    e["col"] = m.col;
    e["row_state"] = m.row_state;
    e["col_state"] = m.col_state;
    e["printed"] = m.printed;
    e["generated"] = m.generated;
    mm.push_back(std::move(e));
  }
  j["mismatches"] = mm;
  j["eigenvalues"] = r.eigenvalues;
  j["eigenvectors"] = r.eigenvectors;
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const DarkStateReport& d) {
  Json j;
  j["m"] = d.m;
  j["n"] = d.n;
  j["energy"] = d.energy;
  j["residual"] = d.residual;
  j["symmetric"] = d.symmetric;
  return j;
}

inline Table to_table(const std::vector<DarkStateReport>& rows) {
  Table t{{"m", "n", "energy", "residual", "symmetric"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({static_cast<std::int64_t>(r.m), static_cast<std::int64_t>(r.n), r.energy, r.residual,
                      r.symmetric});
  return t;
}

/// Machine-readable record for a numerical failure.
inline Json error_record(const Error& e) {
  Json j;
  j["error"]["kind"] = to_string(e.kind());
  j["error"]["message"] = e.what();
  return j;
}

}  // namespace rabi::io
