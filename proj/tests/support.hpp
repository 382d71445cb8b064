#pragma once

// Fixture loading and comparison helpers shared by the test executables.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef CPSHIFT_TEST_DATA_DIR
#error "CPSHIFT_TEST_DATA_DIR must point at tests/data"
#endif

namespace cpshift::test {

inline std::string data_path(const std::string& name) { return std::string(CPSHIFT_TEST_DATA_DIR) + "/" + name; }

/// One row of the Bessel oracle: exp(-x) I, exp(x) K and their derivatives.
struct BesselRow {
  int m;
  double x;
  double i_scaled, k_scaled, di_scaled, dk_scaled;
};

inline std::vector<BesselRow> bessel_table() {
  std::ifstream in(data_path("bessel_oracle.txt"));
  if (!in) throw std::runtime_error("missing bessel_oracle.txt");
  std::vector<BesselRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    BesselRow r{};
    ss >> r.m >> r.x >> r.i_scaled >> r.k_scaled >> r.di_scaled >> r.dk_scaled;
    if (!ss) throw std::runtime_error("malformed oracle row: " + line);
    rows.push_back(r);
  }
  return rows;
}

/// Arbitrary-precision reference values keyed by (case, component).
inline const std::map<std::string, std::map<std::string, double>>& physics_oracle() {
  static const auto table = [] {
    std::map<std::string, std::map<std::string, double>> t;
    std::ifstream in(data_path("physics_oracle.txt"));
    if (!in) throw std::runtime_error("missing physics_oracle.txt");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string key, comp;
      double v;
      ss >> key >> comp >> v;
      if (!ss) throw std::runtime_error("malformed oracle row: " + line);
      t[key][comp] = v;
    }
    return t;
  }();
  return table;
}

inline double oracle(const std::string& key, const std::string& comp) {
  const auto& t = physics_oracle();
  const auto it = t.find(key);
  if (it == t.end() || !it->second.count(comp)) throw std::runtime_error("no oracle value " + key + "/" + comp);
  return it->second.at(comp);
}

inline double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace cpshift::test
