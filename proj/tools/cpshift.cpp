// cpshift: Casimir-Polder response functions and energy shifts for an atom
// near a plane, a cylindrical wire or a half-plane.
//
//   cpshift eval {plane|wire|halfplane} [--d --R --rho --phi --E]
//   cpshift sweep {plane|wire|halfplane} --var X --min A --max B --count N [--spacing lin|log]
//   cpshift figure {fig2|fig3|fig4_phi|fig4_direction|fig5|fig6_combined}
//   cpshift regimes [{plane|wire|halfplane} ...]
//
// Shared flags: --tol --jobs --out --format csv|json --units reduced|si
// --length-unit --dipole.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cpshift/app/commands.hpp"

namespace {

using namespace cpshift;
using namespace cpshift::app;

struct GeometryFlags {
  std::string geometry;
  std::optional<double> d, R, rho, E;
  std::optional<std::string> phi;

  void add_to(CLI::App* cmd, bool geometry_required) {
    auto* g = cmd->add_option("geometry", geometry, "plane, wire or halfplane")
                  ->check(CLI::IsMember(geometry_names()));
    if (geometry_required) g->required();
    cmd->add_option("--d", d, "distance from the surface (wire: rho - R)");
    cmd->add_option("--R", R, "wire radius");
    cmd->add_option("--rho", rho, "radial coordinate (wire axis or half-plane edge)");
    cmd->add_option("--phi", phi, "half-plane polar angle; accepts pi, pi/2, 0.75pi");
    cmd->add_option("--E", E, "transition energy E_ji, inverse length");
  }

  PointParams params() const {
    PointParams p{d, R, rho, std::nullopt, E};
    if (phi) p.phi = parse_angle(*phi);
    return p;
  }
};

struct Shared {
  double tol = quad::QuadSettings{}.rel_tol;
  int jobs = default_jobs();
  std::string out;
  std::string format;
  std::string units = "reduced";
  double length_unit = Units{}.length_m;
  double dipole = Units{}.dipole_Cm;

  RunOptions options() const {
    RunOptions o;
    o.settings.rel_tol = tol;
    o.jobs = jobs;
    o.units.si = units == "si";
    o.units.length_m = length_unit;
    o.units.dipole_Cm = dipole;
    return o;
  }
};

void emit(const Table& t, const Shared& s) {
  const Format f = s.format == "json" ? Format::Json : Format::Csv;
  if (s.out.empty()) {
    write(std::cout, t, f);
    return;
  }
  std::ofstream file(s.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + s.out + " for writing");
  write(file, t, f);
  if (!file) throw std::runtime_error("write to " + s.out + " failed");
}

void print_eval_text(const Table& t, std::ostream& os) {
  const auto& row = t.rows.front();
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << t.columns[i] << " = ";
    if (const auto* d = std::get_if<double>(&row[i])) os << format_number(*d);
    else os << std::get<std::string>(row[i]);
    os << '\n';
  }
}

int report_failures(const Table& t) {
  if (const auto n = failed_rows(t)) std::cerr << "cpshift: " << n << " of " << t.rows.size() << " rows failed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Polder energy shifts near a plane, a wire and a half-plane"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("cpshift ") + kVersion);

  Shared shared;
  app.add_option("--tol", shared.tol, "relative tolerance of quadratures")->check(CLI::PositiveNumber);
  app.add_option("--jobs", shared.jobs, "worker threads for sweeps and figures")->check(CLI::PositiveNumber);
  app.add_option("--out", shared.out, "output file (default: standard output)");
  app.add_option("--format", shared.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--units", shared.units, "reduced or si")->check(CLI::IsMember({"reduced", "si"}));
  app.add_option("--length-unit", shared.length_unit, "length unit L in metres (with --units si)")
      ->check(CLI::PositiveNumber);
  app.add_option("--dipole", shared.dipole, "dipole moment in C m (with --units si)")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "response functions and isotropic shift at one point");
  GeometryFlags eval_flags;
  eval_flags.add_to(eval, true);

  auto* sweep = app.add_subcommand("sweep", "evaluate on a one-parameter grid");
  GeometryFlags sweep_flags;
  sweep_flags.add_to(sweep, true);
  SweepSpec spec;
  std::string spacing = "linear";
  std::string sweep_min, sweep_max;
  sweep->add_option("--var", spec.variable, "swept parameter: d, R, rho, phi or E")
      ->required()
      ->check(CLI::IsMember({"d", "R", "rho", "phi", "E"}));
  sweep->add_option("--min", sweep_min, "lower end of the range")->required();
  sweep->add_option("--max", sweep_max, "upper end of the range")->required();
  sweep->add_option("--count", spec.count, "number of grid points")->required();
  sweep->add_option("--spacing", spacing, "linear or log")->check(CLI::IsMember({"lin", "linear", "log"}));

  auto* figure = app.add_subcommand("figure", "data for the standard figures");
  std::string figure_name;
  FigureOptions fig;
  std::string fig_E, fig_R, fig_rho;
  figure->add_option("name", figure_name, "figure name")->required()->check(CLI::IsMember(figure_names()));
  figure->add_option("--points", fig.points, "grid points (angles for fig4_direction)");
  figure->add_option("--min", fig.min, "lower end of the abscissa");
  figure->add_option("--max", fig.max, "upper end of the abscissa");
  figure->add_option("--E", fig_E, "transition energies (fig3, fig4_phi, fig5) or energy (fig4_direction)");
  figure->add_option("--R", fig_R, "wire radii for fig6_combined");
  figure->add_option("--rho", fig_rho, "radii for fig4_direction");

  auto* regimes = app.add_subcommand("regimes", "classify a point, or list the regimes");
  GeometryFlags regime_flags;
  regime_flags.add_to(regimes, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const RunOptions opt = shared.options();
  try {
    if (*eval) {
      const PointParams p = eval_flags.params();
      check_parameters(eval_flags.geometry, p);
      const Point pt = resolve(eval_flags.geometry, p);
      Table t = point_table(eval_flags.geometry, {pt}, opt, "eval");
      const auto& err = std::get<std::string>(t.rows.front()[t.column("error")]);
      if (shared.format.empty() && shared.out.empty()) print_eval_text(t, std::cout);
      else emit(t, shared);
      if (!err.empty()) {
        std::cerr << "cpshift: " << err << '\n';
        return 2;
      }
      return 0;
    }
    if (*sweep) {
      spec.geometry = sweep_flags.geometry;
      spec.fixed = sweep_flags.params();
      spec.log_spacing = spacing == "log";
      spec.min = spec.variable == "phi" ? parse_angle(sweep_min) : parse_number(sweep_min);
      spec.max = spec.variable == "phi" ? parse_angle(sweep_max) : parse_number(sweep_max);
      const Table t = run_sweep(spec, opt);
      emit(t, shared);
      return report_failures(t);
    }
    if (*figure) {
      if (!fig_E.empty()) {
        const auto list = parse_list(fig_E);
        if (figure_name == "fig4_direction") {
          if (list.size() != 1) throw DomainError("fig4_direction takes a single --E");
          fig.E = list.front();
        } else {
          fig.energies = list;
        }
      }
      if (!fig_R.empty()) fig.radii = parse_list(fig_R);
      if (!fig_rho.empty()) fig.rhos = parse_list(fig_rho);
      const Table t = run_figure(figure_name, fig, opt);
      emit(t, shared);
      return report_failures(t);
    }
    if (*regimes) {
      std::optional<Point> pt;
      if (!regime_flags.geometry.empty()) {
        const PointParams p = regime_flags.params();
        check_parameters(regime_flags.geometry, p);
        pt = resolve(regime_flags.geometry, p);
      }
      emit(run_regimes(pt, opt), shared);
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "cpshift: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cpshift: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
