#pragma once

// Tabular output for the command-line tool: CSV (RFC 4180 quoting, LF line
// endings) and JSON ({"meta": ..., "rows": [...]}), with every number written
// with 17 significant digits so identical runs give identical bytes.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cpshift::app {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("no column named " + name);
  }
};

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) os << format_number(*d);
      else os << csv_field(std::get<std::string>(row[i]));
    }
    os << '\n';
  }
}

inline void write_json(std::ostream& os, const Table& t) {
  auto meta = t.meta;
  meta["columns"] = t.columns;
  os << "{\n  \"meta\": " << meta.dump() << ",\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    {" : "\n    {");
    const auto& row = t.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ", ";
      os << nlohmann::json(t.columns[i]).dump() << ": ";
      if (const auto* d = std::get_if<double>(&row[i])) os << (std::isfinite(*d) ? format_number(*d) : "null");
      else os << nlohmann::json(std::get<std::string>(row[i])).dump();
    }
    os << '}';
  }
  os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

enum class Format { Csv, Json };

inline void write(std::ostream& os, const Table& t, Format f) {
  if (f == Format::Json) write_json(os, t);
  else write_csv(os, t);
}

/// Conversion from reduced units (lengths in L, Xi in 1/L^3, shifts in
/// mu^2/(4 pi eps0 L^3)) to SI.
struct Units {
  bool si = false;
  double length_m = 1e-9;             ///< the length unit L, in metres
  double dipole_Cm = 8.478353625e-30;  ///< dipole moment mu, in C m (default e a0)

  static constexpr double kCoulombConstant = 8.9875517923e9;  ///< 1/(4 pi eps0), N m^2 / C^2

  double xi_factor() const { return si ? 1.0 / (length_m * length_m * length_m) : 1.0; }
  double energy_factor() const {
    return si ? kCoulombConstant * dipole_Cm * dipole_Cm / (length_m * length_m * length_m) : 1.0;
  }
  const char* xi_unit() const { return si ? "1/m^3" : "1/L^3"; }
  const char* energy_unit() const { return si ? "J" : "mu^2/(4 pi eps0 L^3)"; }

  nlohmann::ordered_json describe() const {
    nlohmann::ordered_json j;
    j["system"] = si ? "si" : "reduced";
    if (si) {
      j["length_unit_m"] = length_m;
      j["dipole_Cm"] = dipole_Cm;
    }
    j["xi"] = xi_unit();
    j["energy"] = energy_unit();
    return j;
  }
};

}  // namespace cpshift::app
