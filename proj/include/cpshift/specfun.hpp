#pragma once

// Exponentially scaled modified Bessel functions I_m, K_m of integer order,
// with derivatives, plus the ratio sequences the wire kernels are built from.
//
// Scaling convention: value = exp(scale_exponent) * f(x), where
// scale_exponent = -x for the I family and +x for the K family. When that
// scaled value would leave the double range (large order, tiny argument) an
// extra logarithmic factor is folded into scale_exponent so that the
// mantissa stays O(1).

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cpshift/errors.hpp"

namespace cpshift::specfun {

inline constexpr int kDefaultMaxOrder = 100000;

struct BesselPair {
  double value = 0.0;
  double derivative = 0.0;
  double scale_exponent = 0.0;

  double unscaled_value() const { return value * std::exp(-scale_exponent); }
  double unscaled_derivative() const { return derivative * std::exp(-scale_exponent); }
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kRescale = 1e250;
inline const double kLogRescale = std::log(kRescale);

inline void check_argument(int m, double x, int max_order) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("modified Bessel function: argument must be positive and finite, got " +
                      std::to_string(x));
  if (m < 0 || m > max_order)
    throw DomainError("modified Bessel function: order " + std::to_string(m) +
                      " outside [0, " + std::to_string(max_order) + "]");
}

// exp(-x) I_nu(x) for nu in {0, 1}.
inline double i_scaled_low(int nu, double x) {
  if (x <= 25.0) {
    // Power series; all terms positive.
    const double t = 0.25 * x * x;
    double term = (nu == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= t / (double(k) * double(k + nu));
      sum += term;
      if (term < kEps * 0.1 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Hankel asymptotic expansion; the smallest term is ~exp(-2x) < 1e-21 here.
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (double(k) * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < kEps * 0.1 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

struct KPair {
  double k0;  // exp(x) K_0(x)
  double k1;  // exp(x) K_1(x)
};

inline KPair k_scaled_low(double x) {
  if (x <= 2.0) {
    // Series about the origin with the logarithmic part split off.
    const double gamma = std::numbers::egamma;
    const double t = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    // K_0 = -(ln(x/2)+gamma) I_0 + sum_{k>=1} H_k t^k / (k!)^2
    double i0 = 1.0, term = 1.0, harm = 0.0, s0 = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= t / (double(k) * k);
      harm += 1.0 / k;
      i0 += term;
      s0 += harm * term;
      if (term < kEps * 0.01 * i0) break;
    }
    const double k0 = -(log_half + gamma) * i0 + s0;

    // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_{k>=0} (psi(k+1)+psi(k+2)) t^k / (k!(k+1)!)
    double i1 = 0.5 * x;
    double term1 = 1.0;  // t^k / (k!(k+1)!)
    double h_k = 0.0;
    double s1 = (-2.0 * gamma + 1.0);
    double term_i1 = 0.5 * x;
    for (int k = 1; k < 200; ++k) {
      term1 *= t / (double(k) * (k + 1));
      term_i1 *= t / (double(k) * (k + 1));
      i1 += term_i1;
      h_k += 1.0 / k;
      const double psi_sum = (-gamma + h_k) + (-gamma + h_k + 1.0 / (k + 1));
      s1 += psi_sum * term1;
      if (term1 < kEps * 0.01) break;
    }
    const double k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    const double ex = std::exp(x);
    return {k0 * ex, k1 * ex};
  }

  // Steed's continued fraction (Thompson-Barnett form) for order 0.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace detail

/// I_m(x) / I_{m-1}(x) for m >= 1, by the continued fraction
///   1 / (2m/x + 1 / (2(m+1)/x + ...)),
/// evaluated with the modified Lentz algorithm.
inline double i_ratio(int m, double x) {
  const double tiny = 1e-300;
  double f = 2.0 * m / x;
  double c = f, dd = 0.0;
  for (int j = 1; j < 1000000; ++j) {
    const double b = 2.0 * (m + j) / x;
    dd = b + dd;
    if (dd == 0.0) dd = tiny;
    dd = 1.0 / dd;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    const double delta = c * dd;
    f *= delta;
    if (std::abs(delta - 1.0) < detail::kEps) break;
  }
  return 1.0 / f;
}

/// Fills g[j] = I_j(x) / I_{j-1}(x) for j = 1..m_hi (g[0] is set to 0).
/// The top ratio comes from the continued fraction, the rest from the
/// backward recurrence g_j = 1 / (2j/x + g_{j+1}), which is stable.
inline void i_ratios(double x, int m_hi, std::vector<double>& g) {
  g.assign(std::size_t(m_hi) + 2, 0.0);
  g[std::size_t(m_hi) + 1] = i_ratio(m_hi + 1, x);
  for (int j = m_hi; j >= 1; --j) g[std::size_t(j)] = 1.0 / (2.0 * j / x + g[std::size_t(j) + 1]);
}

/// exp(-x) I_m(x) and exp(-x) I'_m(x).
inline BesselPair bessel_i_scaled(int m, double x, int max_order = kDefaultMaxOrder) {
  detail::check_argument(m, x, max_order);
  const double i0 = detail::i_scaled_low(0, x);
  if (m == 0) {
    const double i1 = detail::i_scaled_low(1, x);
    return {i0, i1, -x};
  }
  // I_m = I_0 * prod_{j=1}^{m} g_j with the product kept in range.
  const double g_top = i_ratio(m + 1, x);
  double g = g_top;
  std::vector<double> ratios(std::size_t(m) + 1);
  for (int j = m; j >= 1; --j) {
    g = 1.0 / (2.0 * j / x + g);
    ratios[std::size_t(j)] = g;
  }
  double value = i0;
  double extra = 0.0;
  for (int j = 1; j <= m; ++j) {
    value *= ratios[std::size_t(j)];
    if (value < 1.0 / detail::kRescale) {
      value *= detail::kRescale;
      extra += detail::kLogRescale;
    }
  }
  // I'_m = (I_{m-1} + I_{m+1}) / 2 = I_m (1/g_m + g_{m+1}) / 2
  const double deriv = 0.5 * value * (1.0 / ratios[std::size_t(m)] + g_top);
  return {value, deriv, -x + extra};
}

/// exp(x) K_m(x) and exp(x) K'_m(x). Upward recurrence, stable for K.
inline BesselPair bessel_k_scaled(int m, double x, int max_order = kDefaultMaxOrder) {
  detail::check_argument(m, x, max_order);
  const auto [k0, k1] = detail::k_scaled_low(x);
  if (m == 0) return {k0, -k1, x};

  double km1 = k0, k = k1, extra = 0.0;
  for (int j = 1; j < m; ++j) {
    const double kp1 = km1 + (2.0 * j / x) * k;
    km1 = k;
    k = kp1;
    if (k > detail::kRescale) {
      k /= detail::kRescale;
      km1 /= detail::kRescale;
      extra -= detail::kLogRescale;
    }
  }
  const double kp1 = km1 + (2.0 * m / x) * k;
  return {k, -0.5 * (km1 + kp1), x + extra};
}

/// I_m K'_m - I'_m K_m from the scaled pairs; equals -1/x identically.
inline double wronskian_check(int m, double x) {
  const BesselPair i = bessel_i_scaled(m, x);
  const BesselPair k = bessel_k_scaled(m, x);
  const double w = i.value * k.derivative - i.derivative * k.value;
  return w * std::exp(-i.scale_exponent - k.scale_exponent);
}

}  // namespace cpshift::specfun
