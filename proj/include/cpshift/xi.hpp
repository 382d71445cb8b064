#pragma once

#include <algorithm>
#include <array>

namespace cpshift {

/// Dipole-orientation response functions (Xi_rho, Xi_phi, Xi_z), in 1/length^3.
/// For the plane mirror the slots hold (normal, parallel, parallel).
struct XiTriple {
  double rho_comp = 0.0;
  double phi_comp = 0.0;
  double z_comp = 0.0;
  /// Absolute error estimate per component, same order as the values.
  std::array<double, 3> errors{0.0, 0.0, 0.0};

  double error_estimate() const { return std::max({errors[0], errors[1], errors[2]}); }
  std::array<double, 3> values() const { return {rho_comp, phi_comp, z_comp}; }
  double sum() const { return rho_comp + phi_comp + z_comp; }

  static XiTriple from(const std::array<double, 3>& v, const std::array<double, 3>& err = {0.0, 0.0, 0.0}) {
    return {v[0], v[1], v[2], err};
  }
};

inline XiTriple scaled(const XiTriple& xi, double factor) {
  const double f = factor < 0 ? -factor : factor;
  return {xi.rho_comp * factor, xi.phi_comp * factor, xi.z_comp * factor,
          {xi.errors[0] * f, xi.errors[1] * f, xi.errors[2] * f}};
}

}  // namespace cpshift
