#pragma once

// Energy shift of an atom from the response functions of one geometry:
//   dW = -sum_j (Xi_rho(E_j) |mu_rho|^2 + Xi_phi(E_j) |mu_phi|^2 + Xi_z(E_j) |mu_z|^2)
// in units where 1/(4 pi eps0) = 1, i.e. dW in mu^2 / L^3.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "cpshift/errors.hpp"
#include "cpshift/halfplane.hpp"
#include "cpshift/plane.hpp"
#include "cpshift/quad.hpp"
#include "cpshift/wire.hpp"
#include "cpshift/xi.hpp"

namespace cpshift {

struct PlaneGeometry {
  double d = 1.0;
};

struct WireGeometry {
  double R = 1.0;
  double rho = 2.0;
};

struct HalfPlaneGeometry {
  double rho = 1.0;
  double phi = std::numbers::pi / 2;
};

using Geometry = std::variant<PlaneGeometry, WireGeometry, HalfPlaneGeometry>;

/// Response functions of a geometry at transition energy E. For the plane the
/// slots are (normal, parallel, parallel).
inline XiTriple response(const Geometry& g, double E, const quad::QuadSettings& settings = {}) {
  struct Visitor {
    double E;
    const quad::QuadSettings& s;
    XiTriple operator()(const PlaneGeometry& p) const { return plane::xi_plane({p.d, E}, s); }
    XiTriple operator()(const WireGeometry& w) const { return wire::xi_wire({w.R, w.rho, E}, s); }
    XiTriple operator()(const HalfPlaneGeometry& h) const { return halfplane::xi_halfplane({h.rho, h.phi, E}, s); }
  };
  return std::visit(Visitor{E, settings}, g);
}

/// Distance from the atom to the nearest point of the surface.
inline double surface_distance(const Geometry& g) {
  struct Visitor {
    double operator()(const PlaneGeometry& p) const { return p.d; }
    double operator()(const WireGeometry& w) const { return w.rho - w.R; }
    double operator()(const HalfPlaneGeometry& h) const {
      const double p = halfplane::canonical_phi(h.phi);
      return p < 0.5 * std::numbers::pi ? h.rho * std::sin(p) : h.rho;
    }
  };
  return std::visit(Visitor{}, g);
}

inline const char* geometry_name(const Geometry& g) {
  struct Visitor {
    const char* operator()(const PlaneGeometry&) const { return "plane"; }
    const char* operator()(const WireGeometry&) const { return "wire"; }
    const char* operator()(const HalfPlaneGeometry&) const { return "halfplane"; }
  };
  return std::visit(Visitor{}, g);
}

/// One virtual transition i -> j of the atom.
struct Transition {
  double E_ji = 0.0;                    ///< E_j - E_i, >= 0 (0 is the electrostatic limit)
  std::array<double, 3> mu_sq{0, 0, 0};  ///< |mu_rho|^2, |mu_phi|^2, |mu_z|^2
};

inline void validate(const Transition& t) {
  if (!(t.E_ji >= 0.0) || !std::isfinite(t.E_ji))
    throw DomainError("transition: E_ji must be non-negative, got " + std::to_string(t.E_ji));
  bool any = false;
  for (double m : t.mu_sq) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("transition: mu_sq components must be non-negative");
    any = any || m > 0.0;
  }
  if (!any) throw DomainError("transition: mu_sq must not be all zero");
}

struct EnergyShift {
  double value = 0.0;
  std::vector<double> per_transition;
  double error_estimate = 0.0;
};

/// Shift summed over transitions, in the order given.
inline EnergyShift energy_shift(const Geometry& g, const std::vector<Transition>& transitions,
                                const quad::QuadSettings& settings = {}) {
  if (transitions.empty()) throw DomainError("energy_shift: at least one transition is required");
  for (const auto& t : transitions) validate(t);

  EnergyShift out;
  out.per_transition.reserve(transitions.size());
  for (std::size_t j = 0; j < transitions.size(); ++j) {
    const auto& t = transitions[j];
    const std::string label = "transition " + std::to_string(j) + " (E_ji = " + std::to_string(t.E_ji) + "): ";
    XiTriple xi;
    try {
      xi = response(g, t.E_ji, settings);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(label + e.what(), e.best_estimate(), e.error_bound());
    } catch (const DomainError& e) {
      throw DomainError(label + e.what());
    }
    const auto v = xi.values();
    double dw = 0.0, err = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      dw -= v[c] * t.mu_sq[c];
      err += xi.errors[c] * t.mu_sq[c];
    }
    out.per_transition.push_back(dw);
    out.value += dw;
    out.error_estimate += err;
  }
  return out;
}

/// Shift for an isotropically polarizable atom with a single transition.
inline EnergyShift isotropic_shift(const Geometry& g, double E, double mu_sq_total,
                                   const quad::QuadSettings& settings = {}) {
  if (!(mu_sq_total > 0.0) || !std::isfinite(mu_sq_total))
    throw DomainError("isotropic_shift: mu_sq_total must be positive");
  const double each = mu_sq_total / 3.0;
  return energy_shift(g, {Transition{E, {each, each, each}}}, settings);
}

/// Coarse retardation label for a surface distance and transition energy:
/// "nonretarded" if d < lambda/3, "retarded" if d > 3 lambda, else
/// "intermediate", with lambda = 1/E.
inline std::string retardation_label(double distance, double E) {
  if (E == 0.0) return "nonretarded";
  const double lambda = 1.0 / E;
  if (distance * wire::kRegimeSeparation <= lambda) return "nonretarded";
  if (distance >= wire::kRegimeSeparation * lambda) return "retarded";
  return "intermediate";
}

/// Regime tag for any geometry: the six-way ordering for the wire, the
/// retardation label otherwise. Unclear wire regimes carry a "~" prefix.
inline std::string regime_tag(const Geometry& g, double E) {
  if (const auto* w = std::get_if<WireGeometry>(&g)) {
    const double lambda = E > 0.0 ? 1.0 / E : std::numeric_limits<double>::infinity();
    const auto r = wire::classify_regime(w->rho - w->R, w->R, lambda);
    return std::string(r.clear ? "" : "~") + wire::to_string(r.tag);
  }
  return retardation_label(surface_distance(g), E);
}

}  // namespace cpshift
