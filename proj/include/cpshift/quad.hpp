#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature on finite and
// semi-infinite intervals, and the primed m-series summation used by the
// wire kernels. Both work on scalars and on fixed-size vectors of values
// (std::array<double, N>), so several integrals sharing one integrand
// evaluation are refined together.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "cpshift/errors.hpp"

namespace cpshift::quad {

struct QuadSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  double series_tail_tol = 1e-10;
  int m_max = 100000;
  /// If set, primed series are summed over exactly m = 0..m_cut with no stopping rule.
  std::optional<int> m_cut;
};

inline void validate(const QuadSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw DomainError("QuadSettings: rel_tol and abs_tol must be positive");
  if (s.m_max < 1) throw DomainError("QuadSettings: m_max must be at least 1");
  if (s.max_subdivisions < 1) throw DomainError("QuadSettings: max_subdivisions must be at least 1");
  if (!(s.series_tail_tol > 0.0)) throw DomainError("QuadSettings: series_tail_tol must be positive");
}

template <class V>
struct BasicQuadResult {
  V value{};
  V error_estimate{};
  long evaluations = 0;
  bool converged = false;
};

using QuadResult = BasicQuadResult<double>;

namespace detail {

template <class V>
struct is_std_array : std::false_type {};
template <std::size_t N>
struct is_std_array<std::array<double, N>> : std::true_type {};

template <class V>
constexpr std::size_t width() {
  if constexpr (std::is_same_v<V, double>) {
    return 1;
  } else {
    static_assert(is_std_array<V>::value, "value type must be double or std::array<double, N>");
    return std::tuple_size_v<V>;
  }
}

template <class V>
double& at(V& v, std::size_t i) {
  if constexpr (std::is_same_v<V, double>) {
    (void)i;
    return v;
  } else {
    return v[i];
  }
}

template <class V>
double at(const V& v, std::size_t i) {
  if constexpr (std::is_same_v<V, double>) {
    (void)i;
    return v;
  } else {
    return v[i];
  }
}

template <class V>
V zero() {
  if constexpr (std::is_same_v<V, double>) {
    return 0.0;
  } else {
    V v;
    v.fill(0.0);
    return v;
  }
}

template <class V>
bool all_finite(const V& v) {
  for (std::size_t i = 0; i < width<V>(); ++i)
    if (!std::isfinite(at(v, i))) return false;
  return true;
}

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478472, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes kXgk[1], kXgk[3], ...
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
struct Panel {
  double a, b;
  V value;
  V error;
};

template <class V, class F>
Panel<V> gk21(F& f, double a, double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  constexpr std::size_t n = width<V>();

  auto eval = [&](double x) {
    V y = f(x);
    ++evals;
    if (!all_finite(y)) throw NanIntegrandError(x);
    return y;
  };

  std::array<V, 21> ys;
  ys[20] = eval(center);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    ys[2 * j] = eval(center - dx);
    ys[2 * j + 1] = eval(center + dx);
  }

  Panel<V> p{a, b, zero<V>(), zero<V>()};
  for (std::size_t c = 0; c < n; ++c) {
    const double fc = at(ys[20], c);
    double kron = kWgk[10] * fc;
    double gauss = 0.0;
    double resabs = kWgk[10] * std::abs(fc);
    for (std::size_t j = 0; j < 10; ++j) {
      const double f1 = at(ys[2 * j], c), f2 = at(ys[2 * j + 1], c);
      kron += kWgk[j] * (f1 + f2);
      resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * kron;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j)
      resasc += kWgk[j] * (std::abs(at(ys[2 * j], c) - mean) + std::abs(at(ys[2 * j + 1], c) - mean));

    const double ah = std::abs(half);
    kron *= half;
    gauss *= half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs(kron - gauss);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    at(p.value, c) = kron;
    at(p.error, c) = err;
  }
  return p;
}

template <class V>
double tolerance_for(const V& total, std::size_t c, const QuadSettings& s) {
  return std::max(s.rel_tol * std::abs(at(total, c)), s.abs_tol);
}

// Core adaptive driver over a finite interval of the (possibly mapped) variable.
template <class V, class F>
BasicQuadResult<V> adaptive(F&& f, double a, double b, const QuadSettings& s, bool throw_on_failure) {
  validate(s);
  constexpr std::size_t n = width<V>();
  long evals = 0;
  std::vector<Panel<V>> panels;
  panels.reserve(std::size_t(s.max_subdivisions) + 1);
  panels.push_back(gk21<V>(f, a, b, evals));

  auto totals = [&](V& value, V& error) {
    value = zero<V>();
    error = zero<V>();
    for (const auto& p : panels)
      for (std::size_t c = 0; c < n; ++c) {
        at(value, c) += at(p.value, c);
        at(error, c) += at(p.error, c);
      }
  };

  V value, error;
  totals(value, error);
  while (true) {
    bool done = true;
    for (std::size_t c = 0; c < n; ++c)
      if (at(error, c) > tolerance_for(value, c, s)) done = false;
    if (done) return {value, error, evals, true};

    // Bisect the panel with the largest error relative to its component tolerance.
    std::size_t worst = panels.size();
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      const double mid = 0.5 * (p.a + p.b);
      if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b))) continue;  // unsplittable
      double score = 0.0;
      for (std::size_t c = 0; c < n; ++c)
        score = std::max(score, at(p.error, c) / tolerance_for(value, c, s));
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    if (worst == panels.size() || int(panels.size()) >= s.max_subdivisions) break;

    const Panel<V> p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = gk21<V>(f, p.a, mid, evals);
    panels.push_back(gk21<V>(f, mid, p.b, evals));
    totals(value, error);
  }

  if (throw_on_failure) {
    std::size_t worst_c = 0;
    for (std::size_t c = 1; c < n; ++c)
      if (at(error, c) / tolerance_for(value, c, s) > at(error, worst_c) / tolerance_for(value, worst_c, s))
        worst_c = c;
    const double worst_err = at(error, worst_c), worst_val = at(value, worst_c);
    throw ConvergenceError("adaptive quadrature did not converge after " + std::to_string(panels.size()) +
                               " panels",
                           worst_val, worst_err);
  }
  return {value, error, evals, false};
}

}  // namespace detail

/// Integral of f over [a, b].
template <class V = double, class F>
BasicQuadResult<V> integrate(F&& f, double a, double b, const QuadSettings& settings = {}) {
  if (!(a <= b)) throw DomainError("integrate: require a <= b");
  if (a == b) return {detail::zero<V>(), detail::zero<V>(), 0, true};
  return detail::adaptive<V>(f, a, b, settings, true);
}

/// Integral of f over [lower, infinity). The interval is mapped onto (0, 1] by
/// x = lower + s (1 - t) / t with s = decay_scale, which handles both
/// exponentially and algebraically decaying tails.
template <class V = double, class F>
BasicQuadResult<V> integrate_semi_infinite(F&& f, double decay_scale, const QuadSettings& settings = {},
                                           double lower = 0.0) {
  if (!(decay_scale > 0.0) || !std::isfinite(decay_scale))
    throw DomainError("integrate_semi_infinite: decay_scale must be positive and finite");
  constexpr std::size_t n = detail::width<V>();
  auto mapped = [&](double t) {
    const double x = lower + decay_scale * (1.0 - t) / t;
    const double jac = decay_scale / (t * t);
    V y = f(x);
    if (!detail::all_finite(y)) throw NanIntegrandError(x);
    for (std::size_t c = 0; c < n; ++c) detail::at(y, c) *= jac;
    return y;
  };
  return detail::adaptive<V>(mapped, 0.0, 1.0, settings, true);
}

/// (1/2) term(0) + sum_{m>=1} term(m).
///
/// term is called for m = 0, 1, 2, ... in order, so it may keep state between
/// calls. Summation stops once |term(m)| <= series_tail_tol * |partial sum|
/// holds for three consecutive m (componentwise); a geometric tail estimate
/// from the last two terms goes into error_estimate.
template <class V = double, class Term>
BasicQuadResult<V> sum_primed_series(Term&& term, const QuadSettings& settings = {}) {
  using detail::at;
  constexpr std::size_t n = detail::width<V>();
  validate(settings);

  BasicQuadResult<V> r;
  r.value = detail::zero<V>();
  r.error_estimate = detail::zero<V>();
  V t = term(0);
  r.evaluations = 1;
  for (std::size_t c = 0; c < n; ++c) at(r.value, c) = 0.5 * at(t, c);
  V abs_sum = r.value;
  for (std::size_t c = 0; c < n; ++c) at(abs_sum, c) = std::abs(at(abs_sum, c));

  if (settings.m_cut) {
    for (int m = 1; m <= *settings.m_cut; ++m) {
      t = term(m);
      ++r.evaluations;
      for (std::size_t c = 0; c < n; ++c) {
        at(r.value, c) += at(t, c);
        at(abs_sum, c) += std::abs(at(t, c));
      }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t c = 0; c < n; ++c) at(r.error_estimate, c) = 4.0 * eps * at(abs_sum, c);
    r.converged = true;
    return r;
  }

  V prev = t;
  int quiet = 0;
  for (int m = 1; m <= settings.m_max; ++m) {
    t = term(m);
    ++r.evaluations;
    bool small = true;
    for (std::size_t c = 0; c < n; ++c) {
      at(r.value, c) += at(t, c);
      at(abs_sum, c) += std::abs(at(t, c));
      if (std::abs(at(t, c)) > settings.series_tail_tol * std::abs(at(r.value, c))) small = false;
    }
    quiet = small ? quiet + 1 : 0;
    if (quiet >= 3) {
      const double eps = std::numeric_limits<double>::epsilon();
      for (std::size_t c = 0; c < n; ++c) {
        const double last = std::abs(at(t, c)), before = std::abs(at(prev, c));
        double tail = last;
        if (before > 0.0 && last < before) {
          const double q = last / before;
          tail = last * q / (1.0 - q);
        }
        at(r.error_estimate, c) = tail + 4.0 * eps * at(abs_sum, c);
      }
      r.converged = true;
      return r;
    }
    prev = t;
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(at(t, c)));
  throw ConvergenceError("primed series did not converge by m_max = " + std::to_string(settings.m_max),
                         at(r.value, 0), worst);
}

}  // namespace cpshift::quad
