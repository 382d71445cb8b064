#pragma once

// Building blocks of the cpshift command-line tool: argument parsing helpers,
// point evaluation, parameter sweeps, figure data and regime reports. Every
// command produces a Table; rows are computed concurrently and stored in grid
// order.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cpshift/app/output.hpp"
#include "cpshift/errors.hpp"
#include "cpshift/halfplane.hpp"
#include "cpshift/plane.hpp"
#include "cpshift/quad.hpp"
#include "cpshift/shift.hpp"
#include "cpshift/wire.hpp"

namespace cpshift::app {

inline constexpr const char* kVersion = "1.0.0";

// ------------------------------------------------------------------ parsing

inline double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw DomainError("not a number: '" + text + "'");
  return v;
}

/// Angles in radians, with pi literals: "pi", "pi/2", "0.75pi", "3pi/4", "3*pi/4".
inline double parse_angle(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += char(std::tolower(static_cast<unsigned char>(c)));
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return parse_number(s);
  std::string coef = s.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double value = std::numbers::pi;
  if (coef == "-") value = -value;
  else if (!coef.empty()) value *= parse_number(coef);
  const std::string rest = s.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw DomainError("malformed angle: '" + raw + "'");
    value /= parse_number(rest.substr(1));
  }
  return value;
}

/// Comma-separated list of numbers.
inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

// ------------------------------------------------------------ concurrency

/// Calls f(i) for i in [0, n) on up to `jobs` threads. Exceptions escaping f
/// are rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// --------------------------------------------------------------- settings

struct RunOptions {
  quad::QuadSettings settings;
  int jobs = 1;
  Units units;
};

inline nlohmann::ordered_json describe(const RunOptions& o, const std::string& command) {
  nlohmann::ordered_json m;
  m["tool"] = "cpshift";
  m["version"] = kVersion;
  m["command"] = command;
  nlohmann::ordered_json t;
  t["rel_tol"] = o.settings.rel_tol;
  t["abs_tol"] = o.settings.abs_tol;
  t["series_tail_tol"] = o.settings.series_tail_tol;
  t["max_subdivisions"] = o.settings.max_subdivisions;
  t["m_max"] = o.settings.m_max;
  m["tolerances"] = t;
  m["units"] = o.units.describe();
  return m;
}

// ----------------------------------------------------------------- points

/// Geometry parameters as given on the command line; unset ones take defaults.
struct PointParams {
  std::optional<double> d{}, R{}, rho{}, phi{}, E{};
};

struct Point {
  Geometry geometry;
  double E = 0.0;
};

inline const std::vector<std::string>& geometry_names() {
  static const std::vector<std::string> names = {"plane", "wire", "halfplane"};
  return names;
}

/// Parameters each geometry accepts.
inline std::vector<std::string> accepted_parameters(const std::string& geometry) {
  if (geometry == "plane") return {"d", "E"};
  if (geometry == "wire") return {"d", "R", "rho", "E"};
  if (geometry == "halfplane") return {"rho", "phi", "E"};
  throw DomainError("unknown geometry '" + geometry + "' (expected plane, wire or halfplane)");
}

inline void check_parameters(const std::string& geometry, const PointParams& p) {
  const auto ok = accepted_parameters(geometry);
  auto check = [&](const char* name, const std::optional<double>& v) {
    if (v && std::find(ok.begin(), ok.end(), name) == ok.end())
      throw DomainError(std::string("--") + name + " does not apply to geometry " + geometry);
  };
  check("d", p.d);
  check("R", p.R);
  check("rho", p.rho);
  check("phi", p.phi);
  check("E", p.E);
  if (geometry == "wire" && p.d && p.rho) throw DomainError("wire: give either --d or --rho, not both");
}

/// Defaults: plane d = 1; wire R = 1, rho = R + d with d = 1; half-plane
/// rho = 1, phi = pi/2; E = 0 everywhere.
inline Point resolve(const std::string& geometry, const PointParams& p) {
  const double E = p.E.value_or(0.0);
  if (geometry == "plane") return {PlaneGeometry{p.d.value_or(1.0)}, E};
  if (geometry == "wire") {
    const double R = p.R.value_or(1.0);
    return {WireGeometry{R, p.rho ? *p.rho : R + p.d.value_or(1.0)}, E};
  }
  if (geometry == "halfplane") return {HalfPlaneGeometry{p.rho.value_or(1.0), p.phi.value_or(std::numbers::pi / 2)}, E};
  throw DomainError("unknown geometry '" + geometry + "'");
}

/// Input columns of a geometry, in output order.
inline std::vector<std::string> input_columns(const std::string& geometry) {
  if (geometry == "plane") return {"d", "E"};
  if (geometry == "wire") return {"R", "rho", "d", "E"};
  return {"rho", "phi", "E"};
}

inline std::vector<Cell> input_cells(const Point& pt) {
  if (const auto* p = std::get_if<PlaneGeometry>(&pt.geometry)) return {p->d, pt.E};
  if (const auto* w = std::get_if<WireGeometry>(&pt.geometry)) return {w->R, w->rho, w->rho - w->R, pt.E};
  const auto& h = std::get<HalfPlaneGeometry>(pt.geometry);
  return {h.rho, h.phi, pt.E};
}

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {"xi_rho",  "xi_phi", "xi_z",   "err_rho", "err_phi",
                                                "err_z",   "dW_iso", "regime", "error"};
  return cols;
}

struct PointResult {
  XiTriple xi;
  std::string regime;
  std::string error;
  bool ok = false;
};

inline PointResult evaluate(const Point& pt, const quad::QuadSettings& settings) {
  PointResult r;
  try {
    r.regime = regime_tag(pt.geometry, pt.E);
    r.xi = response(pt.geometry, pt.E, settings);
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

/// Xi triple, errors, isotropic shift for a unit dipole, regime and error text.
inline std::vector<Cell> result_cells(const PointResult& r, const Units& u) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!r.ok) return {nan, nan, nan, nan, nan, nan, nan, r.regime, r.error};
  const double xf = u.xi_factor();
  const double dw = -r.xi.sum() / 3.0 * u.energy_factor();
  return {r.xi.rho_comp * xf,  r.xi.phi_comp * xf,  r.xi.z_comp * xf, r.xi.errors[0] * xf, r.xi.errors[1] * xf,
          r.xi.errors[2] * xf, dw, r.regime, std::string()};
}

inline Table point_table(const std::string& geometry, const std::vector<Point>& points, const RunOptions& opt,
                         const std::string& command) {
  Table t;
  t.columns = input_columns(geometry);
  for (const auto& c : result_columns()) t.columns.push_back(c);
  t.meta = describe(opt, command);
  t.meta["geometry"] = geometry;
  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), opt.jobs, [&](std::size_t i) { results[i] = evaluate(points[i], opt.settings); });
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto row = input_cells(points[i]);
    for (auto& c : result_cells(results[i], opt.units)) row.push_back(std::move(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Number of rows whose "error" column is non-empty.
inline std::size_t failed_rows(const Table& t) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), "error");
  if (it == t.columns.end()) return 0;
  const std::size_t col = std::size_t(it - t.columns.begin());
  std::size_t n = 0;
  for (const auto& row : t.rows)
    if (const auto* s = std::get_if<std::string>(&row[col]); s && !s->empty()) ++n;
  return n;
}

// ------------------------------------------------------------------ sweep

struct SweepSpec {
  std::string geometry = "wire";
  std::string variable = "d";
  double min = 0.0, max = 1.0;
  int count = 2;
  bool log_spacing = false;
  PointParams fixed;
};

inline std::vector<double> grid(double lo, double hi, int count, bool log_spacing) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = double(i) / double(count - 1);
    g[std::size_t(i)] = log_spacing ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  g.back() = hi;
  return g;
}

inline void validate(const SweepSpec& s) {
  const auto ok = accepted_parameters(s.geometry);
  if (std::find(ok.begin(), ok.end(), s.variable) == ok.end())
    throw DomainError("sweep: variable " + s.variable + " does not apply to geometry " + s.geometry);
  if (!(s.min < s.max)) throw DomainError("sweep: require min < max");
  if (s.count < 2) throw DomainError("sweep: count must be at least 2");
  if (s.log_spacing && !(s.min > 0.0)) throw DomainError("sweep: log spacing requires min > 0");
  check_parameters(s.geometry, s.fixed);
  for (const auto& v : {s.fixed.d, s.fixed.R, s.fixed.rho})
    if (v && !(*v > 0.0)) throw DomainError("sweep: lengths must be positive");
  if (s.fixed.E && !(*s.fixed.E >= 0.0)) throw DomainError("sweep: E must be non-negative");
  if (s.geometry == "wire" && s.variable == "d" && s.fixed.rho) throw DomainError("sweep: d is swept, drop --rho");
  if (s.geometry == "wire" && s.variable == "rho" && s.fixed.d) throw DomainError("sweep: rho is swept, drop --d");
}

inline Table run_sweep(const SweepSpec& s, const RunOptions& opt) {
  validate(s);
  std::vector<Point> points;
  for (double x : grid(s.min, s.max, s.count, s.log_spacing)) {
    PointParams p = s.fixed;
    if (s.variable == "d") p.d = x;
    else if (s.variable == "R") p.R = x;
    else if (s.variable == "rho") p.rho = x;
    else if (s.variable == "phi") p.phi = x;
    else p.E = x;
    points.push_back(resolve(s.geometry, p));
  }
  Table t = point_table(s.geometry, points, opt, "sweep");
  nlohmann::ordered_json sw;
  sw["variable"] = s.variable;
  sw["min"] = s.min;
  sw["max"] = s.max;
  sw["count"] = s.count;
  sw["spacing"] = s.log_spacing ? "log" : "linear";
  t.meta["sweep"] = sw;
  return t;
}

// ---------------------------------------------------------------- figures

struct FigureOptions {
  std::optional<int> points;
  std::optional<double> min, max;  ///< range of the abscissa
  std::vector<double> energies;    ///< fig3/fig4_phi/fig5 curve parameters (units of 1/R)
  std::vector<double> radii;       ///< fig6 curve parameters (units of 1/E)
  std::vector<double> rhos;        ///< fig4_direction radii (units of 1/E)
  std::optional<double> E;         ///< fig4_direction transition energy
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4_phi", "fig4_direction", "fig5", "fig6_combined"};
  return names;
}

namespace detail {

inline std::string label(const char* prefix, double v) { return std::string(prefix) + "=" + format_number(v); }

inline double plane_factor(double d) { return 4.0 * std::numbers::pi * d * d * d * d; }

template <class Row>
Table figure_table(std::vector<std::string> columns, std::size_t n, const RunOptions& opt, const std::string& name,
                   Row&& row) {
  Table t;
  t.columns = std::move(columns);
  t.columns.push_back("error");
  t.meta = describe(opt, "figure");
  t.meta["figure"] = name;
  t.rows.resize(n);
  const std::size_t width = t.columns.size();
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    std::vector<Cell> cells;
    std::string error;
    try {
      cells = row(i);
    } catch (const std::exception& e) {
      error = e.what();
    }
    cells.resize(width - 1, std::numeric_limits<double>::quiet_NaN());
    cells.push_back(error);
    t.rows[i] = std::move(cells);
  });
  return t;
}

}  // namespace detail

/// Retarded limit of the wire, E d^4 Xi against d/R: exact, large-R and
/// small-R approximations. Every column tends to 1/(4 pi) as d -> 0.
inline Table figure_fig2(const FigureOptions& f, const RunOptions& opt) {
  const auto xs = grid(f.min.value_or(0.05), f.max.value_or(50.0), f.points.value_or(30), true);
  std::vector<std::string> cols = {"d_over_R"};
  for (const char* kind : {"exact", "largeR", "smallR"})
    for (const char* c : {"rho", "phi", "z"}) cols.push_back(std::string(kind) + "_" + c);
  cols.push_back("plane_limit");
  Table t = detail::figure_table(cols, xs.size(), opt, "fig2", [&](std::size_t i) {
    const double d = xs[i], R = 1.0, rho = R + d, d4 = d * d * d * d;
    std::vector<Cell> row = {d};
    for (const auto& xi : {wire::xi_wire_retarded_limit(R, rho, opt.settings),
                           wire::xi_wire_large_radius_approx(R, rho, opt.settings),
                           wire::xi_wire_small_radius_approx(R, rho, opt.settings)})
      for (double v : xi.values()) row.push_back(d4 * v);
    row.push_back(1.0 / (4.0 * std::numbers::pi));
    return row;
  });
  t.meta["ordinate"] = "E d^4 Xi in the limit E -> infinity";
  return t;
}

/// One component of the wire response, normalized by the plane Casimir-Polder
/// value 1/(4 pi d^4 E), against d/R for several E (in units of 1/R), plus
/// the same normalization of the retarded limit.
inline Table figure_component(const std::string& name, int component, const FigureOptions& f, const RunOptions& opt) {
  const auto xs = grid(f.min.value_or(0.01), f.max.value_or(100.0), f.points.value_or(25), true);
  const auto energies = f.energies.empty() ? std::vector<double>{0.1, 1.0, 10.0} : f.energies;
  for (double E : energies)
    if (!(E > 0.0)) throw DomainError("figure: energies must be positive");
  std::vector<std::string> cols = {"d_over_R"};
  for (double E : energies) cols.push_back(detail::label("E", E));
  cols.push_back("retarded_limit");
  Table t = detail::figure_table(cols, xs.size(), opt, name, [&](std::size_t i) {
    const double d = xs[i], R = 1.0, rho = R + d;
    std::vector<Cell> row = {d};
    for (double E : energies)
      row.push_back(detail::plane_factor(d) * E * wire::xi_wire({R, rho, E}, opt.settings).values()[std::size_t(component)]);
    row.push_back(detail::plane_factor(d) * wire::xi_wire_retarded_limit(R, rho, opt.settings).values()[std::size_t(component)]);
    return row;
  });
  t.meta["ordinate"] = "4 pi d^4 E Xi";
  t.meta["component"] = component == 0 ? "rho" : component == 1 ? "phi" : "z";
  return t;
}

/// All three wire components against d E for several radii R (in units of
/// 1/E), normalized like figure_component.
inline Table figure_fig6(const FigureOptions& f, const RunOptions& opt) {
  const auto xs = grid(f.min.value_or(0.01), f.max.value_or(100.0), f.points.value_or(25), true);
  const auto radii = f.radii.empty() ? std::vector<double>{0.1, 1.0, 10.0} : f.radii;
  for (double R : radii)
    if (!(R > 0.0)) throw DomainError("figure: radii must be positive");
  std::vector<std::string> cols = {"d_E"};
  for (double R : radii)
    for (const char* c : {"rho", "phi", "z"}) cols.push_back(detail::label("R", R) + "_" + c);
  Table t = detail::figure_table(cols, xs.size(), opt, "fig6_combined", [&](std::size_t i) {
    const double d = xs[i], E = 1.0;
    std::vector<Cell> row = {d};
    for (double R : radii)
      for (double v : wire::xi_wire({R, R + d, E}, opt.settings).values()) row.push_back(detail::plane_factor(d) * E * v);
    return row;
  });
  t.meta["ordinate"] = "4 pi d^4 E Xi";
  return t;
}

/// Unit force vectors on an isotropic atom around the half-plane edge.
inline Table figure_force(const FigureOptions& f, const RunOptions& opt) {
  const double E = f.E.value_or(1.0);
  if (!(E > 0.0)) throw DomainError("figure: E must be positive");
  const auto rhos = f.rhos.empty() ? std::vector<double>{10.0, 20.0, 40.0} : f.rhos;
  const int n_phi = f.points.value_or(16);
  if (n_phi < 2) throw DomainError("figure: need at least 2 angles");
  std::vector<std::pair<double, double>> sites;
  for (double rho : rhos)
    for (int k = 1; k < n_phi; ++k) sites.emplace_back(rho, k * std::numbers::pi / (0.5 * n_phi));
  Table t = detail::figure_table({"rho", "phi", "x", "y", "f_rho", "f_phi", "f_x", "f_y", "asymptotic", "degenerate"},
                                 sites.size(), opt, "fig4_direction", [&](std::size_t i) {
                                   const auto [rho, phi] = sites[i];
                                   const auto fd = halfplane::force_direction(rho, phi, E, opt.settings);
                                   const double c = std::cos(phi), s = std::sin(phi);
                                   return std::vector<Cell>{rho,
                                                            phi,
                                                            rho * c,
                                                            rho * s,
                                                            fd.f_rho,
                                                            fd.f_phi,
                                                            fd.f_rho * c - fd.f_phi * s,
                                                            fd.f_rho * s + fd.f_phi * c,
                                                            std::string(fd.asymptotic ? "yes" : "no"),
                                                            std::string(fd.degenerate ? "yes" : "no")};
                                 });
  t.meta["E"] = E;
  return t;
}

inline Table run_figure(const std::string& name, const FigureOptions& f, const RunOptions& opt) {
  if (name == "fig2") return figure_fig2(f, opt);
  if (name == "fig3") return figure_component(name, 0, f, opt);
  if (name == "fig4_phi") return figure_component(name, 1, f, opt);
  if (name == "fig5") return figure_component(name, 2, f, opt);
  if (name == "fig6_combined") return figure_fig6(f, opt);
  if (name == "fig4_direction") return figure_force(f, opt);
  throw DomainError("unknown figure '" + name + "'");
}

// ---------------------------------------------------------------- regimes

struct RegimeInfo {
  wire::RegimeTag tag;
  const char* ordering;
  const char* description;
};

inline const std::vector<RegimeInfo>& regime_catalogue() {
  static const std::vector<RegimeInfo> list = {
      {wire::RegimeTag::NR_close, "d < R < lambda", "electrostatic; plane image result 1/(8 d^3), 1/(16 d^3)"},
      {wire::RegimeTag::NR_mid, "d < lambda < R", "electrostatic; plane image result, curvature negligible"},
      {wire::RegimeTag::NR_thin, "R < d < lambda", "electrostatic; lowest azimuthal orders dominate"},
      {wire::RegimeTag::RET_close, "lambda < d < R", "retarded; large-radius approximation, plane 1/(4 pi d^4 E)"},
      {wire::RegimeTag::RET_thin, "lambda < R < d", "retarded; small-radius approximation"},
      {wire::RegimeTag::RET_thin2, "R < lambda < d", "retarded; small-radius approximation (limits commute)"},
  };
  return list;
}

/// Regime report for a wire point, or the catalogue of all regimes when no
/// point is given.
inline Table run_regimes(const std::optional<Point>& pt, const RunOptions& opt) {
  Table t;
  t.meta = describe(opt, "regimes");
  if (!pt) {
    t.columns = {"tag", "ordering", "description"};
    for (const auto& r : regime_catalogue())
      t.rows.push_back({std::string(wire::to_string(r.tag)), std::string(r.ordering), std::string(r.description)});
    return t;
  }
  const double distance = surface_distance(pt->geometry);
  const double lambda = pt->E > 0.0 ? 1.0 / pt->E : std::numeric_limits<double>::infinity();
  t.columns = {"geometry", "d", "R", "lambda", "retardation", "tag", "clear", "description"};
  std::vector<Cell> row = {std::string(geometry_name(pt->geometry)), distance};
  if (const auto* w = std::get_if<WireGeometry>(&pt->geometry)) {
    wire::validate_geometry(w->R, w->rho);
    const auto r = wire::classify_regime(distance, w->R, lambda);
    const auto& info = *std::find_if(regime_catalogue().begin(), regime_catalogue().end(),
                                     [&](const RegimeInfo& i) { return i.tag == r.tag; });
    row.insert(row.end(), {w->R, lambda, retardation_label(distance, pt->E), std::string(wire::to_string(r.tag)),
                           std::string(r.clear ? "yes" : "no"), std::string(info.description)});
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.insert(row.end(), {nan, lambda, retardation_label(distance, pt->E), std::string(), std::string(), std::string()});
  }
  t.rows.push_back(std::move(row));
  return t;
}

}  // namespace cpshift::app
