#pragma once

// Atom near a perfectly reflecting semi-infinite half-plane, at distance rho
// from the edge and polar angle phi measured from the plate.
//
// Each response function is a single integral
//   Xi = 1/(16 pi rho^3) int_0^inf d eta exp(-2 rho E eta) [A(eta) + B(eta, phi)]
// where A is phi-independent and B carries the angular dependence through
// s = sin(phi), c = cos(phi). Written literally, A and B each contain 1/eta^4
// (and, near phi = pi, 1/(eta^2 + s^2)^3) pieces that cancel. Both are
// evaluated here from exact rearrangements free of that cancellation:
//   * A as a rational function of w = sqrt(1 + eta^2);
//   * B for phi > pi/2 as a polynomial in v = w - 1 and a^2 = cos^2(phi/2)
//     over w^p (eta^2 + s^2)^3, whose low-order coefficients are all positive.

#include <array>
#include <cmath>
#include <initializer_list>
#include <iterator>
#include <numbers>
#include <string>

#include "cpshift/errors.hpp"
#include "cpshift/quad.hpp"
#include "cpshift/xi.hpp"

namespace cpshift::halfplane {

/// sin(phi) below which the atom is treated as sitting in front of a plane.
inline constexpr double kPlaneGuard = 1e-6;
/// Distance in wavelengths beyond which the retarded closed forms apply.
inline constexpr double kDefaultRetardedValidity = 5.0;

struct HalfPlaneConfig {
  double rho = 1.0;                                   ///< distance from the edge
  double phi = std::numbers::pi / 2;                  ///< polar angle from the plate, in (0, 2 pi)
  double E = 0.0;                                     ///< transition energy E_ji
};

/// Maps phi in (pi, 2 pi) onto its mirror image in (0, pi).
inline double canonical_phi(double phi) { return phi > std::numbers::pi ? 2.0 * std::numbers::pi - phi : phi; }

inline void validate_position(double rho, double phi) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("halfplane: rho must be positive, got " + std::to_string(rho));
  if (!(phi > 0.0) || !(phi < 2.0 * std::numbers::pi))
    throw DomainError("halfplane: phi must lie in (0, 2 pi), got " + std::to_string(phi));
}

inline void validate(const HalfPlaneConfig& cfg) {
  validate_position(cfg.rho, cfg.phi);
  if (!(cfg.E >= 0.0) || !std::isfinite(cfg.E))
    throw DomainError("halfplane: E must be non-negative, got " + std::to_string(cfg.E));
}

namespace detail {

// B numerators: coefficient of a2^j v^i is kB*[j][i].
inline constexpr double kBrho[6][9] = {
    {0, 0, 0, 12, 22, 14, 3},       {0, 0, 72, 112, 52, -4, -6},   {0, 144, 144, -16, -88, -32},
    {96, -64, -224, -192, -48},     {-160, -160, -80},             {64, 64, 32}};
inline constexpr double kBphi[6][9] = {
    {0, 0, 0, 12, -10, -52, -50, -20, -3},   {0, 0, 72, -80, -284, -216, -44, 16, 6},
    {0, 144, -240, -448, -112, 192, 152, 32}, {96, -320, -32, 512, 608, 288, 48},
    {-160, 320, 480, 320, 80},               {64, -128, -192, -128, -32}};
inline constexpr double kBz[6][9] = {
    {0, 0, 0, 12, -2, -26, -19, -4}, {0, 0, 72, -32, -148, -92, -18}, {0, 144, -144, -256, -104, -16},
    {96, -256, -64, 64, 16},         {-160, 160, 80},                 {64, -64, -32}};

inline double bivariate(const double (&coef)[6][9], double v, double a2) {
  double outer = 0.0;
  for (int j = 5; j >= 0; --j) {
    double inner = 0.0;
    for (int i = 8; i >= 0; --i) inner = inner * v + coef[j][i];
    outer = outer * a2 + inner;
  }
  return outer;
}

// Beyond this eta every bracket is below 1e-75 and the polynomial forms
// would overflow.
inline constexpr double kEtaCutoff = 1e25;

}  // namespace detail

/// Angular data shared by all eta points of one integral.
struct Angle {
  double phi;  ///< canonical, in (0, pi]
  double s;    ///< sin(phi)
  double c;    ///< cos(phi)
  double a2;   ///< cos^2(phi/2)

  static Angle of(double phi_in) {
    const double phi = canonical_phi(phi_in);
    // cos(phi/2) = sin((pi - phi)/2) is exactly 0 at phi = pi.
    const double a = std::sin(0.5 * (std::numbers::pi - phi));
    return {phi, std::sin(phi), std::cos(phi), a * a};
  }
};

/// The bracketed integrands {A + B} for (rho, phi, z), cancellation-free.
inline std::array<double, 3> brackets(double eta, const Angle& ang) {
  if (eta > detail::kEtaCutoff) return {0.0, 0.0, 0.0};
  const double e2 = eta * eta;
  const double w = std::hypot(1.0, eta);
  const double w2 = w * w, w3 = w2 * w, w5 = w3 * w2;
  const double wp1sq = (w + 1.0) * (w + 1.0);

  const std::array<double, 3> a = {(3.0 * w2 + 2.0 * w + 1.0) / (wp1sq * w3),
                                   (3.0 * w2 * w2 + 2.0 * w3 - 2.0 * w2 - 6.0 * w - 3.0) / (wp1sq * w5),
                                   -(4.0 * w3 - w2 - 6.0 * w - 3.0) / (wp1sq * w5)};

  const double s2 = ang.s * ang.s;
  const double q = e2 + s2;
  const double den = q * q * q;
  std::array<double, 3> b;
  if (ang.phi <= 0.5 * std::numbers::pi) {
    const double s4 = s2 * s2, e4 = e2 * e2, e6 = e4 * e2, c = ang.c;
    b[0] = 4.0 * ((2.0 * e2 + 1.0) * s2 - e2) / den +
           c * ((2.0 + e2) * s4 + 2.0 * s2 * (3.0 * e4 + 6.0 * e2 + 2.0) - e2 * (3.0 * e4 + 6.0 * e2 + 4.0)) / (w3 * den);
    b[1] = 4.0 * ((1.0 - 2.0 * e2) * s2 + e2) / den +
           c * ((2.0 - 2.0 * e2 - e4) * s4 + 2.0 * s2 * (2.0 + 2.0 * e2 - 6.0 * e4 - 3.0 * e6) +
                e2 * (3.0 * e6 + 6.0 * e4 + 10.0 * e2 + 4.0)) / (w5 * den);
    b[2] = 4.0 * (s2 - e2) / den -
           c * ((e2 - 2.0) * s4 + 2.0 * (e4 - 4.0 * e2 - 2.0) * s2 + e2 * (9.0 * e4 + 10.0 * e2 + 4.0)) / (w5 * den);
  } else {
    // Near the edge side use s^2 = 4 a^2 (1 - a^2) for consistency with a2.
    const double v = e2 / (1.0 + w);
    const double s2a = 4.0 * ang.a2 * (1.0 - ang.a2);
    const double qa = e2 + s2a;
    const double dena = qa * qa * qa;
    b[0] = detail::bivariate(detail::kBrho, v, ang.a2) / (w3 * dena);
    b[1] = detail::bivariate(detail::kBphi, v, ang.a2) / (w5 * dena);
    b[2] = detail::bivariate(detail::kBz, v, ang.a2) / (w5 * dena);
  }
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

/// The brackets exactly as printed, with the 1/eta^4 pieces cancelling
/// numerically. Loses accuracy as eta -> 0 or phi -> pi.
inline std::array<double, 3> brackets_literal(double eta, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double s2 = s * s, s4 = s2 * s2;
  const double t2 = eta * eta, t4 = t2 * t2, t6 = t4 * t2;
  const double w2 = 1.0 + t2;
  const double w3 = std::pow(w2, 1.5), w5 = std::pow(w2, 2.5);
  const double den = std::pow(t2 + s2, 3);
  const double br = (3.0 * t4 + 6.0 * t2 + 4.0) / (t4 * w3) - 4.0 / t4 + 4.0 / den * ((2.0 * t2 + 1.0) * s2 - t2) +
                    c / (w3 * den) * ((2.0 + t2) * s4 + 2.0 * s2 * (3.0 * t4 + 6.0 * t2 + 2.0) - t2 * (3.0 * t4 + 6.0 * t2 + 4.0));
  const double bp = (3.0 * t6 + 6.0 * t4 + 10.0 * t2 + 4.0) / (t4 * w5) - 4.0 / t4 + 4.0 / den * ((1.0 - 2.0 * t2) * s2 + t2) +
                    c / (w5 * den) *
                        ((2.0 - 2.0 * t2 - t4) * s4 + 2.0 * s2 * (2.0 + 2.0 * t2 - 6.0 * t4 - 3.0 * t6) +
                         t2 * (3.0 * t6 + 6.0 * t4 + 10.0 * t2 + 4.0));
  const double bz = (9.0 * t4 + 10.0 * t2 + 4.0) / (t4 * w5) - 4.0 / t4 + 4.0 * (s2 - t2) / den -
                    c / (w5 * den) * ((t2 - 2.0) * s4 + 2.0 * (t4 - 4.0 * t2 - 2.0) * s2 + t2 * (9.0 * t4 + 10.0 * t2 + 4.0));
  return {br, bp, bz};
}

/// Exact response functions of the half-plane.
inline XiTriple xi_halfplane(const HalfPlaneConfig& cfg, const quad::QuadSettings& settings = {}) {
  validate(cfg);
  const Angle ang = Angle::of(cfg.phi);
  if (ang.phi < 0.5 * std::numbers::pi && ang.s < kPlaneGuard)
    throw DomainError("halfplane: sin(phi) = " + std::to_string(ang.s) +
                      " puts the atom in front of an effectively infinite plate; use xi_plane with d = rho sin(phi)");

  const double two_re = 2.0 * cfg.rho * cfg.E;
  auto f = [&](double eta) {
    auto b = brackets(eta, ang);
    const double weight = std::exp(-two_re * eta);
    for (double& x : b) x *= weight;
    return b;
  };

  using V = std::array<double, 3>;
  const double scale = 1.0 / (1.0 + two_re);
  quad::BasicQuadResult<V> r;
  if (ang.s < 0.5) {
    // The angular part varies on the scale eta ~ sin(phi).
    const auto inner = quad::integrate<V>(f, 0.0, ang.s, settings);
    const auto outer = quad::integrate_semi_infinite<V>(f, std::max(ang.s, std::min(1.0, scale)), settings, ang.s);
    for (std::size_t c = 0; c < 3; ++c) {
      r.value[c] = inner.value[c] + outer.value[c];
      r.error_estimate[c] = inner.error_estimate[c] + outer.error_estimate[c];
    }
  } else {
    r = quad::integrate_semi_infinite<V>(f, scale, settings);
  }
  const double pre = 1.0 / (16.0 * std::numbers::pi * cfg.rho * cfg.rho * cfg.rho);
  return XiTriple::from({pre * r.value[0], pre * r.value[1], pre * r.value[2]},
                        {pre * r.error_estimate[0], pre * r.error_estimate[1], pre * r.error_estimate[2]});
}

/// Electrostatic closed forms. Near phi = pi the 1/sin^3 terms cancel and a
/// Taylor series in (pi - phi) is used instead.
inline XiTriple xi_halfplane_nonretarded(double rho, double phi) {
  validate_position(rho, phi);
  const double p = canonical_phi(phi);
  const double eps = std::numbers::pi - p;
  std::array<double, 3> v;
  if (eps < 0.3) {
    const double e2 = eps * eps;
    auto series = [e2](std::initializer_list<double> c) {
      double acc = 0.0;
      for (auto it = std::rbegin(c); it != std::rend(c); ++it) acc = acc * e2 + *it;
      return acc;
    };
    v = {series({10.0 / 3.0, 11.0 / 30.0, 151.0 / 2520.0, 677.0 / 75600.0, 8483.0 / 6652800.0,
                 9523411.0 / 54486432000.0, 15165883.0 / 653837184000.0, 1358563.0 / 453682944000.0}),
         series({0.0, 7.0 / 30.0, 31.0 / 504.0, 127.0 / 10800.0, 73.0 / 38016.0, 1414477.0 / 4953312000.0,
                 8191.0 / 205286400.0, 16931177.0 / 3175780608000.0}),
         series({4.0 / 3.0, 1.0 / 5.0, 17.0 / 420.0, 29.0 / 4200.0, 1181.0 / 1108800.0, 1393481.0 / 9081072000.0,
                 763967.0 / 36324288000.0, 133541.0 / 48117888000.0})};
  } else {
    const double s = std::sin(p), c = std::cos(p);
    const double s2 = s * s, s3 = s2 * s;
    v = {5.0 / 3.0 + c / s2 + eps * (1.0 + s2) / s3, -1.0 / 3.0 + 2.0 * c / s2 + eps * (1.0 + c * c) / s3,
         2.0 / 3.0 + c / s2 + eps / s3};
  }
  const double pre = 1.0 / (16.0 * std::numbers::pi * rho * rho * rho);
  return XiTriple::from({pre * v[0], pre * v[1], pre * v[2]});
}

struct RetardedXi {
  XiTriple xi;
  bool valid;  ///< atom several wavelengths away from the plate
};

/// Whether the retarded asymptotics apply at (rho, phi, E).
inline bool retarded_valid(double rho, double phi, double E, double threshold = kDefaultRetardedValidity) {
  const double p = canonical_phi(phi);
  const double distance = p < 0.5 * std::numbers::pi ? rho * std::sin(p) : rho;
  return distance * E >= threshold;
}

/// Leading large-E closed forms, 1/(64 pi rho^4 E) [+-3 + 1/sin^4(phi/2) + 2/sin^2(phi/2)].
inline RetardedXi xi_halfplane_retarded(double rho, double phi, double E,
                                        double threshold = kDefaultRetardedValidity) {
  validate_position(rho, phi);
  if (!(E > 0.0) || !std::isfinite(E)) throw DomainError("halfplane: retarded limit requires E > 0");
  const double sh = std::sin(0.5 * canonical_phi(phi));
  const double inv2 = 1.0 / (sh * sh);
  const double angular = inv2 * inv2 + 2.0 * inv2;
  const double pre = 1.0 / (64.0 * std::numbers::pi * rho * rho * rho * rho * E);
  return {XiTriple::from({pre * (3.0 + angular), pre * (-3.0 + angular), pre * (3.0 + angular)}),
          retarded_valid(rho, phi, E, threshold)};
}

struct ForceOptions {
  double relative_step = 1e-4;                        ///< finite-difference step, in units of rho
  double validity_threshold = kDefaultRetardedValidity;
  bool use_asymptotics = true;                        ///< use closed forms where valid
};

struct ForceDirection {
  double f_rho = 0.0;        ///< radial component of the unit vector
  double f_phi = 0.0;        ///< azimuthal component of the unit vector
  bool degenerate = false;   ///< gradient vanished; components are zero
  bool asymptotic = false;   ///< computed from the retarded closed forms
};

/// Direction of the force on an isotropically polarizable atom: the
/// normalized -grad of U = -(Xi_rho + Xi_phi + Xi_z)/3 in (rho, rho phi).
inline ForceDirection force_direction(double rho, double phi, double E, const quad::QuadSettings& settings = {},
                                      const ForceOptions& opt = {}) {
  validate(HalfPlaneConfig{rho, phi, E});
  const bool asym = opt.use_asymptotics && E > 0.0 && retarded_valid(rho, phi, E, opt.validity_threshold);
  auto total = [&](double r, double p) {
    if (asym) return xi_halfplane_retarded(r, p, E, opt.validity_threshold).xi.sum();
    return xi_halfplane(HalfPlaneConfig{r, p, E}, settings).sum();
  };
  // Keep the stencil inside (0, 2 pi); canonical_phi folds the far side back.
  const double h = opt.relative_step * rho;
  const double dphi = h / rho;
  const double d_rho = (total(rho + h, phi) - total(rho - h, phi)) / (2.0 * h);
  const double d_phi = (total(rho, phi + dphi) - total(rho, phi - dphi)) / (2.0 * dphi);

  ForceDirection out;
  out.asymptotic = asym;
  const double fr = d_rho / 3.0, fp = d_phi / (3.0 * rho);
  const double norm = std::hypot(fr, fp);
  const double reference = std::abs(total(rho, phi)) / rho;
  if (!(norm > 1e-12 * reference)) {
    out.degenerate = true;
    return out;
  }
  out.f_rho = fr / norm;
  out.f_phi = fp / norm;
  return out;
}

}  // namespace cpshift::halfplane
