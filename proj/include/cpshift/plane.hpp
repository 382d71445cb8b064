#pragma once

// Perfectly reflecting infinite plane mirror: the reference both the wire
// (d << R) and the half-plane (phi -> 0) must reproduce.
//
// Natural units hbar = c = 1: lengths in an arbitrary unit L, transition
// energies in 1/L, Xi in 1/L^3.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cpshift/errors.hpp"
#include "cpshift/quad.hpp"
#include "cpshift/xi.hpp"

namespace cpshift::plane {

struct PlaneConfig {
  double d = 1.0;  ///< atom-mirror distance
  double E = 0.0;  ///< transition energy E_ji
};

inline void validate(const PlaneConfig& cfg) {
  if (!(cfg.d > 0.0) || !std::isfinite(cfg.d)) throw DomainError("plane: d must be positive, got " + std::to_string(cfg.d));
  if (!(cfg.E >= 0.0) || !std::isfinite(cfg.E)) throw DomainError("plane: E must be non-negative, got " + std::to_string(cfg.E));
}

/// Kernels of the normal and parallel integrals in eta, at retardation
/// parameter 2 d E.
inline std::array<double, 2> plane_kernel(double eta, double two_de) {
  const double q = 1.0 + eta * eta;
  const double base = std::exp(-two_de * eta) / (q * q);
  return {base, base * (1.0 - eta * eta) / q};
}

/// Exact Casimir-Polder response of a plane mirror, (normal, parallel, parallel).
inline XiTriple xi_plane(const PlaneConfig& cfg, const quad::QuadSettings& settings = {}) {
  validate(cfg);
  const double two_de = 2.0 * cfg.d * cfg.E;
  const auto r = quad::integrate_semi_infinite<std::array<double, 2>>(
      [two_de](double eta) { return plane_kernel(eta, two_de); }, 1.0 / (1.0 + two_de), settings);
  const double pre = 1.0 / (2.0 * std::numbers::pi * cfg.d * cfg.d * cfg.d);
  return {pre * r.value[0], pre * r.value[1], pre * r.value[1],
          {pre * r.error_estimate[0], pre * r.error_estimate[1], pre * r.error_estimate[1]}};
}

/// Electrostatic limit: (1/(8 d^3), 1/(16 d^3), 1/(16 d^3)).
inline XiTriple xi_plane_nonretarded(double d) {
  validate({d, 0.0});
  const double d3 = d * d * d;
  return {1.0 / (8.0 * d3), 1.0 / (16.0 * d3), 1.0 / (16.0 * d3)};
}

/// Fully retarded limit: every component 1/(4 pi d^4 E).
inline XiTriple xi_plane_retarded(double d, double E) {
  validate({d, E});
  if (!(E > 0.0)) throw DomainError("plane: retarded limit requires E > 0");
  const double v = 1.0 / (4.0 * std::numbers::pi * d * d * d * d * E);
  return {v, v, v};
}

}  // namespace cpshift::plane
