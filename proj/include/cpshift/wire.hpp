#pragma once

// Atom at radius rho outside a perfectly reflecting cylinder of radius R.
//
// Every response function is a primed sum over azimuthal order m of k
// integrals whose kernels are products of I_m(kR)/K_m(kR) (or the derivative
// ratio) with squares of K_m(k rho), K'_m(k rho). The kernels are assembled
// from quantities that stay O(1) for any (m, k):
//
//   P_m      = I_m(kR) K_m(kR)
//   Q_m      = K_m(k rho) / K_m(kR)      (carries the exp(-k d) damping)
//   LI, LK   = logarithmic derivatives I'_m/I_m, K'_m/K_m
//
// so that, e.g., I_m/K_m [K_m(k rho)]^2 = P_m Q_m^2. All integrals run over
// the dimensionless u = k d with d = rho - R.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cpshift/errors.hpp"
#include "cpshift/quad.hpp"
#include "cpshift/specfun.hpp"
#include "cpshift/xi.hpp"

namespace cpshift::wire {

/// Smallest supported d/R; closer than this the plane-mirror formulas apply.
inline constexpr double kMinRelativeDistance = 1e-3;

struct WireConfig {
  double R = 1.0;    ///< wire radius
  double rho = 2.0;  ///< radial coordinate of the atom
  double E = 0.0;    ///< transition energy E_ji

  double d() const { return rho - R; }
};

inline void validate_geometry(double R, double rho) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("wire: R must be positive, got " + std::to_string(R));
  if (!(rho > R) || !std::isfinite(rho))
    throw DomainError("wire: atom must be outside the wire (rho > R), got rho = " + std::to_string(rho));
  if ((rho - R) / R < kMinRelativeDistance)
    throw DomainError("wire: d/R = " + std::to_string((rho - R) / R) + " is below " +
                      std::to_string(kMinRelativeDistance) + "; use the plane-mirror formulas");
}

inline void validate(const WireConfig& cfg) {
  validate_geometry(cfg.R, cfg.rho);
  if (!(cfg.E >= 0.0) || !std::isfinite(cfg.E))
    throw DomainError("wire: E must be non-negative, got " + std::to_string(cfg.E));
}

enum class Retardation {
  Exact,          ///< finite E
  Electrostatic,  ///< E = 0
  Limit,          ///< coefficient of 1/E as E -> infinity
};

namespace detail {

// Retardation brackets, dimensionless (u = k d, e = E d):
//   a = sqrt(e^2+u^2) - e,  b = e^2/sqrt(e^2+u^2) - e,  c = u^2/sqrt(e^2+u^2)
// written without cancellation. In Limit mode they are the 1/e coefficients.
struct Brackets {
  double a, b, c;
};

inline Brackets brackets(Retardation mode, double u, double e) {
  switch (mode) {
    case Retardation::Electrostatic:
      return {u, 0.0, u};
    case Retardation::Limit:
      return {0.5 * u * u, -0.5 * u * u, u * u};
    case Retardation::Exact:
    default: {
      const double s = std::hypot(e, u);
      const double u2 = u * u;
      return {u2 / (s + e), -e * u2 / (s * (s + e)), u2 / s};
    }
  }
}

// Kernel pieces for one (m, u):
//   T1 = I/K [K'(k rho)]^2, T2 = I'/K' [K(k rho)]^2,
//   T3 = I'/K' [K'(k rho)]^2, T4 = I/K [K(k rho)]^2.
struct KernelTerms {
  double t1, t2, t3, t4;
};

inline KernelTerms kernel_terms(double p, double q, double li, double lk_R, double lk_rho) {
  const double t4 = p * q * q;
  return {t4 * lk_rho * lk_rho, t4 * li / lk_R, t4 * li * lk_rho * lk_rho / lk_R, t4};
}

// The three summands for order m (without the 2/pi and the primed weight).
inline std::array<double, 3> summand(const KernelTerms& t, const Brackets& br, int m, double u, double rho_d) {
  const double ratio = m / (u * rho_d);
  const double q = ratio * ratio;
  return {u * (br.a * t.t1 + br.b * q * t.t2), u * (br.b * t.t3 + br.a * q * t.t4), u * br.c * t.t4};
}

// Kernel terms at order m from single-point scaled Bessel evaluations.
inline KernelTerms kernel_terms_direct(int m, double xR, double xr) {
  const auto i = specfun::bessel_i_scaled(m, xR);
  const auto kR = specfun::bessel_k_scaled(m, xR);
  const auto kr = specfun::bessel_k_scaled(m, xr);
  // P = I K at xR: the exp(-/+x) scalings cancel.
  const double p = i.value * kR.value * std::exp(-i.scale_exponent - kR.scale_exponent);
  const double q = kr.value / kR.value * std::exp(kR.scale_exponent - kr.scale_exponent);
  return kernel_terms(p, q, i.derivative / i.value, kR.derivative / kR.value, kr.derivative / kr.value);
}

// Sum over m at fixed u using ratio recurrences: K ratios upward, I ratios
// downward from a continued fraction seed.
class SummedKernel {
 public:
  SummedKernel(double R_d, double rho_d, double e, Retardation mode, const quad::QuadSettings& s)
      : R_d_(R_d), rho_d_(rho_d), e_(e), mode_(mode), settings_(s), log_ratio_(std::log1p(1.0 / R_d)) {}

  std::array<double, 3> operator()(double u) const {
    const double xR = u * R_d_, xr = u * rho_d_;
    const Brackets br = brackets(mode_, u, e_);

    const auto kR = specfun::detail::k_scaled_low(xR);
    const auto kr = specfun::detail::k_scaled_low(xr);
    const double i0 = specfun::detail::i_scaled_low(0, xR);

    double p = i0 * kR.k0;
    double q = kr.k0 / kR.k0 * std::exp(-(xr - xR));
    if (q == 0.0) return {0.0, 0.0, 0.0};
    double hR = kR.k1 / kR.k0, hr = kr.k1 / kr.k0;  // h_m = K_{m+1}/K_m
    double hR_prev = 0.0, hr_prev = 0.0;

    // Terms fall off like exp(-m^2 d / (k R rho)) once the log-ratio decay
    // exp(-2 m ln(rho/R)) has not already cut them.
    double n_est = std::min(xr, 8.0 * std::sqrt(u * R_d_ * rho_d_)) + 15.0 / log_ratio_ + 20.0;
    if (settings_.m_cut) n_est = std::max(n_est, double(*settings_.m_cut) + 1.0);
    int n = int(std::min(n_est, double(settings_.m_max) + 1.0));
    std::vector<double> g;
    specfun::i_ratios(xR, n, g);

    int m_cur = 0;
    auto term = [&](int m) -> std::array<double, 3> {
      if (m > m_cur) {
        // advance from m_cur = m - 1 to m
        p *= g[std::size_t(m)] * hR;
        q *= hr / hR;
        hR_prev = hR;
        hr_prev = hr;
        hR = 1.0 / hR + 2.0 * m / xR;
        hr = 1.0 / hr + 2.0 * m / xr;
        m_cur = m;
      }
      if (m + 1 >= int(g.size()) - 1) {
        n = std::min(2 * n + 16, settings_.m_max + 2);
        specfun::i_ratios(xR, n, g);
      }
      const double li = (m == 0) ? g[1] : 0.5 * (1.0 / g[std::size_t(m)] + g[std::size_t(m) + 1]);
      const double lkR = (m == 0) ? -hR : -0.5 * (1.0 / hR_prev + hR);
      const double lkr = (m == 0) ? -hr : -0.5 * (1.0 / hr_prev + hr);
      return summand(kernel_terms(p, q, li, lkR, lkr), br, m, u, rho_d_);
    };
    const auto r = quad::sum_primed_series<std::array<double, 3>>(term, settings_);
    return r.value;
  }

 private:
  double R_d_, rho_d_, e_;
  Retardation mode_;
  quad::QuadSettings settings_;
  double log_ratio_;
};

inline XiTriple evaluate(double R, double rho, double E, Retardation mode, const quad::QuadSettings& settings) {
  const double d = rho - R;
  const SummedKernel kernel(R / d, rho / d, E * d, mode, settings);
  const auto r = quad::integrate_semi_infinite<std::array<double, 3>>(kernel, 1.0, settings);
  double pre = 2.0 / (std::numbers::pi * d * d * d);
  if (mode == Retardation::Limit) pre /= d;
  std::array<double, 3> v, err;
  for (std::size_t c = 0; c < 3; ++c) {
    v[c] = pre * r.value[c];
    err[c] = pre * r.error_estimate[c] + 10.0 * settings.series_tail_tol * std::abs(v[c]);
  }
  return XiTriple::from(v, err);
}

}  // namespace detail

/// Electrostatic (E = 0) response of the wire.
inline XiTriple xi_wire_nonretarded(double R, double rho, const quad::QuadSettings& settings = {}) {
  validate_geometry(R, rho);
  return detail::evaluate(R, rho, 0.0, Retardation::Electrostatic, settings);
}

/// Exact response at finite E; E = 0 is routed to the electrostatic form.
inline XiTriple xi_wire(const WireConfig& cfg, const quad::QuadSettings& settings = {}) {
  validate(cfg);
  if (cfg.E == 0.0) return xi_wire_nonretarded(cfg.R, cfg.rho, settings);
  return detail::evaluate(cfg.R, cfg.rho, cfg.E, Retardation::Exact, settings);
}

/// lim_{E -> inf} E * Xi, in 1/length^4.
inline XiTriple xi_wire_retarded_limit(double R, double rho, const quad::QuadSettings& settings = {}) {
  validate_geometry(R, rho);
  return detail::evaluate(R, rho, 0.0, Retardation::Limit, settings);
}

/// The m-th (unweighted) summand of the three series, each a single k
/// integral evaluated from single-point Bessel functions. Summing these with
/// weight 1/2 on m = 0 reproduces xi_wire.
inline XiTriple wire_summand(const WireConfig& cfg, int m, Retardation mode = Retardation::Exact,
                             const quad::QuadSettings& settings = {}) {
  validate(cfg);
  if (m < 0) throw DomainError("wire_summand: m must be non-negative");
  const double d = cfg.d();
  const double R_d = cfg.R / d, rho_d = cfg.rho / d, e = cfg.E * d;
  if (mode == Retardation::Exact && cfg.E == 0.0) mode = Retardation::Electrostatic;
  auto f = [&](double u) {
    const auto t = detail::kernel_terms_direct(m, u * R_d, u * rho_d);
    return detail::summand(t, detail::brackets(mode, u, e), m, u, rho_d);
  };
  const auto r = quad::integrate_semi_infinite<std::array<double, 3>>(f, 1.0, settings);
  double pre = 2.0 / (std::numbers::pi * d * d * d);
  if (mode == Retardation::Limit) pre /= d;
  return XiTriple::from({pre * r.value[0], pre * r.value[1], pre * r.value[2]},
                        {pre * r.error_estimate[0], pre * r.error_estimate[1], pre * r.error_estimate[2]});
}

namespace detail {

// Low-order kernel terms used by both retarded approximations.
struct LowOrder {
  KernelTerms m0, m1;
};

inline LowOrder low_order(double xR, double xr) { return {kernel_terms_direct(0, xR, xr), kernel_terms_direct(1, xR, xr)}; }

// A(x) of the geometric-series correction, returned as (A, 1 - A).
inline std::pair<double, double> large_radius_A(double x, double R, double rho) {
  const double d = rho - R;
  const double q = R / rho;
  const double s = std::sqrt(1.0 + x * x);
  const double sR = std::sqrt(1.0 + x * x * q * q);
  const double s_minus_sR = x * x * (d / rho) * (1.0 + q) / (s + sR);
  const double logA = 2.0 * std::log1p(-d / rho) + 2.0 * std::log1p(s_minus_sR / (1.0 + sR)) - 2.0 * s_minus_sR;
  return {std::exp(logA), -std::expm1(logA)};
}

}  // namespace detail

/// Large-radius retarded approximation (coefficient of 1/E): the lowest-order
/// Bessel integrals plus the summed uniform-asymptotic correction in A(x).
inline XiTriple xi_wire_large_radius_approx(double R, double rho, const quad::QuadSettings& settings = {}) {
  validate_geometry(R, rho);
  const double d = rho - R;
  const double R_d = R / d, rho_d = rho / d;

  const auto bessel = quad::integrate_semi_infinite<std::array<double, 3>>(
      [&](double u) -> std::array<double, 3> {
        const auto lo = detail::low_order(u * R_d, u * rho_d);
        const double u3 = u * u * u;
        return {u3 * lo.m0.t1, u3 * lo.m1.t4, u3 * lo.m0.t4};
      },
      1.0, settings);

  const auto geometric = quad::integrate_semi_infinite<std::array<double, 2>>(
      [&](double x) -> std::array<double, 2> {
        const auto [A, one_minus_A] = detail::large_radius_A(x, R, rho);
        const double omA2 = one_minus_A * one_minus_A;
        const double F = A * (A * A + 4.0 * A + 1.0) / (omA2 * omA2);
        const double s = std::sqrt(1.0 + x * x);
        return {x * (s + 1.0 / s) * F, x * x * x / s * F};
      },
      rho / (2.0 * d), settings);

  const double d4 = d * d * d * d, rho4 = rho * rho * rho * rho;
  const double pi = std::numbers::pi;
  const std::array<double, 3> v = {(bessel.value[0] / d4 + geometric.value[0] / rho4) / (2.0 * pi),
                                   (bessel.value[1] / d4 + geometric.value[0] / rho4) / (2.0 * pi),
                                   (bessel.value[2] / d4 + geometric.value[1] / rho4) / pi};
  const std::array<double, 3> err = {
      (bessel.error_estimate[0] / d4 + geometric.error_estimate[0] / rho4) / (2.0 * pi),
      (bessel.error_estimate[1] / d4 + geometric.error_estimate[0] / rho4) / (2.0 * pi),
      (bessel.error_estimate[2] / d4 + geometric.error_estimate[1] / rho4) / pi};
  return XiTriple::from(v, err);
}

/// Small-radius retarded approximation (coefficient of 1/E): only the m = 0
/// and m = 1 summands that dominate when d >> R.
inline XiTriple xi_wire_small_radius_approx(double R, double rho, const quad::QuadSettings& settings = {}) {
  validate_geometry(R, rho);
  const double d = rho - R;
  const double R_d = R / d, rho_d = rho / d;
  const double dr2 = (d / rho) * (d / rho);

  const auto r = quad::integrate_semi_infinite<std::array<double, 3>>(
      [&](double u) -> std::array<double, 3> {
        const auto lo = detail::low_order(u * R_d, u * rho_d);
        const double u3 = u * u * u;
        return {u3 * lo.m0.t1 - 2.0 * dr2 * u * lo.m1.t2, u * (u * u + 2.0 * dr2) * lo.m1.t4 - 2.0 * u3 * lo.m1.t3,
                u3 * lo.m0.t4};
      },
      1.0, settings);

  const double d4 = d * d * d * d;
  const double pi = std::numbers::pi;
  const std::array<double, 3> pre = {1.0 / (2.0 * pi * d4), 1.0 / (2.0 * pi * d4), 1.0 / (pi * d4)};
  return XiTriple::from({pre[0] * r.value[0], pre[1] * r.value[1], pre[2] * r.value[2]},
                        {pre[0] * r.error_estimate[0], pre[1] * r.error_estimate[1], pre[2] * r.error_estimate[2]});
}

// ---------------------------------------------------------------- regimes

enum class RegimeTag {
  NR_close,   ///< d << R << lambda
  NR_mid,     ///< d << lambda << R
  NR_thin,    ///< R << d << lambda
  RET_close,  ///< lambda << d << R
  RET_thin,   ///< lambda << R << d
  RET_thin2,  ///< R << lambda << d
};

/// Pairs of scales closer than this factor do not define a clear regime.
inline constexpr double kRegimeSeparation = 3.0;

struct Regime {
  RegimeTag tag;
  bool clear;  ///< every pair of (d, R, lambda) differs by at least kRegimeSeparation
};

inline const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::NR_close: return "NR_close";
    case RegimeTag::NR_mid: return "NR_mid";
    case RegimeTag::NR_thin: return "NR_thin";
    case RegimeTag::RET_close: return "RET_close";
    case RegimeTag::RET_thin: return "RET_thin";
    case RegimeTag::RET_thin2: return "RET_thin2";
  }
  return "?";
}

/// Orders the three length scales. lambda may be +infinity (E = 0).
inline Regime classify_regime(double d, double R, double lambda) {
  if (!(d > 0.0) || !(R > 0.0) || !(lambda > 0.0))
    throw DomainError("classify_regime: all length scales must be positive");
  const bool retarded = lambda < d;
  RegimeTag tag;
  if (!retarded) {
    if (R < d) tag = RegimeTag::NR_thin;
    else tag = (R < lambda) ? RegimeTag::NR_close : RegimeTag::NR_mid;
  } else {
    if (d < R) tag = RegimeTag::RET_close;
    else tag = (lambda < R) ? RegimeTag::RET_thin : RegimeTag::RET_thin2;
  }
  auto apart = [](double x, double y) { return std::max(x, y) >= kRegimeSeparation * std::min(x, y); };
  return {tag, apart(d, R) && apart(d, lambda) && apart(R, lambda)};
}

}  // namespace cpshift::wire
