#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cpshift/specfun.hpp"
#include "support.hpp"

using namespace cpshift;
using namespace cpshift::specfun;
using cpshift::test::rel_diff;

namespace {

// exp(-x) I_m(x) from a pair, whatever extra scaling it carries.
double i_scaled_of(const BesselPair& p, double x) { return p.value * std::exp(-x - p.scale_exponent); }
double di_scaled_of(const BesselPair& p, double x) { return p.derivative * std::exp(-x - p.scale_exponent); }
double k_scaled_of(const BesselPair& p, double x) { return p.value * std::exp(x - p.scale_exponent); }
double dk_scaled_of(const BesselPair& p, double x) { return p.derivative * std::exp(x - p.scale_exponent); }

const std::vector<int> kOrders = {0, 1, 2, 3, 5, 10, 20, 50, 100, 200};
const std::vector<double> kArgs = {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 2.5, 5.0, 10.0, 25.0, 26.0, 50.0, 100.0, 1e3, 1e4};

}  // namespace

TEST(Specfun, OracleTable) {
  const auto rows = test::bessel_table();
  ASSERT_GE(rows.size(), 100u);
  for (const auto& r : rows) {
    SCOPED_TRACE("m = " + std::to_string(r.m) + ", x = " + std::to_string(r.x));
    const auto i = bessel_i_scaled(r.m, r.x);
    const auto k = bessel_k_scaled(r.m, r.x);
    EXPECT_LT(rel_diff(i_scaled_of(i, r.x), r.i_scaled), 1e-12);
    EXPECT_LT(rel_diff(di_scaled_of(i, r.x), r.di_scaled), 1e-12);
    EXPECT_LT(rel_diff(k_scaled_of(k, r.x), r.k_scaled), 1e-12);
    EXPECT_LT(rel_diff(dk_scaled_of(k, r.x), r.dk_scaled), 1e-12);
  }
}

TEST(Specfun, SmallArgumentLimits) {
  EXPECT_NEAR(bessel_i_scaled(0, 1e-12).value, 1.0, 1e-11);
  EXPECT_LT(bessel_i_scaled(3, 1e-6).unscaled_value(), 1e-18);
  EXPECT_GT(bessel_i_scaled(3, 1e-6).unscaled_value(), 0.0);
}

TEST(Specfun, ScalingConvention) {
  // Without extra rescaling the exponents are exactly -x and +x.
  EXPECT_EQ(bessel_i_scaled(0, 3.0).scale_exponent, -3.0);
  EXPECT_EQ(bessel_i_scaled(4, 3.0).scale_exponent, -3.0);
  EXPECT_EQ(bessel_k_scaled(0, 3.0).scale_exponent, 3.0);
  EXPECT_EQ(bessel_k_scaled(4, 3.0).scale_exponent, 3.0);
  const auto p = bessel_i_scaled(2, 1.5);
  EXPECT_LT(rel_diff(p.unscaled_value(), std::cyl_bessel_i(2.0, 1.5)), 1e-13);
  const auto q = bessel_k_scaled(2, 1.5);
  EXPECT_LT(rel_diff(q.unscaled_value(), std::cyl_bessel_k(2.0, 1.5)), 1e-13);
}

TEST(Specfun, KZeroDerivativeIsMinusKOne) {
  for (double x : kArgs) EXPECT_EQ(bessel_k_scaled(0, x).derivative, -bessel_k_scaled(1, x).value);
}

TEST(Specfun, LargeArgumentK) {
  const double x = 50.0;
  const auto k = bessel_k_scaled(0, x);
  // exp(x) K_0(x) = sqrt(pi/2x) (1 - 1/(8x) + 9/(128 x^2) - ...)
  const double approx = std::sqrt(std::numbers::pi / (2 * x)) * (1 - 1 / (8 * x) + 9 / (128 * x * x));
  EXPECT_LT(rel_diff(k.value, approx), 1e-6);
}

TEST(Specfun, WronskianExamples) {
  EXPECT_NEAR(wronskian_check(0, 1.0), -1.0, 1e-12);
  EXPECT_NEAR(wronskian_check(5, 0.1), -10.0, 1e-10);
  EXPECT_NEAR(wronskian_check(50, 30.0), -1.0 / 30.0, 1e-13);
}

TEST(Specfun, WronskianGrid) {
  for (int m = 0; m <= 200; m += (m < 10 ? 1 : 7)) {
    for (double lx = -4.0; lx <= 4.0; lx += 0.25) {
      const double x = std::pow(10.0, lx);
      EXPECT_LT(std::abs(x * wronskian_check(m, x) + 1.0), 1e-10) << "m = " << m << ", x = " << x;
    }
  }
}

TEST(Specfun, RecurrenceConsistency) {
  for (int m = 1; m <= 60; m += 3) {
    for (double x : {0.05, 0.3, 1.0, 4.0, 17.0, 80.0, 400.0}) {
      SCOPED_TRACE("m = " + std::to_string(m) + ", x = " + std::to_string(x));
      const auto im1 = bessel_i_scaled(m - 1, x), i0 = bessel_i_scaled(m, x), ip1 = bessel_i_scaled(m + 1, x);
      // Bring all three to a common scale.
      const double a = im1.value * std::exp(i0.scale_exponent - im1.scale_exponent);
      const double b = ip1.value * std::exp(i0.scale_exponent - ip1.scale_exponent);
      EXPECT_LT(rel_diff(a - b, 2.0 * m / x * i0.value), 1e-10);

      const auto km1 = bessel_k_scaled(m - 1, x), k0 = bessel_k_scaled(m, x), kp1 = bessel_k_scaled(m + 1, x);
      const double c = km1.value * std::exp(k0.scale_exponent - km1.scale_exponent);
      const double d = kp1.value * std::exp(k0.scale_exponent - kp1.scale_exponent);
      EXPECT_LT(rel_diff(d - c, 2.0 * m / x * k0.value), 1e-10);
    }
  }
}

TEST(Specfun, DerivativeIdentities) {
  for (int m = 1; m <= 30; m += 4) {
    for (double x : {0.2, 2.0, 20.0}) {
      const auto i = bessel_i_scaled(m, x), k = bessel_k_scaled(m, x);
      const auto im1 = bessel_i_scaled(m - 1, x), ip1 = bessel_i_scaled(m + 1, x);
      const auto km1 = bessel_k_scaled(m - 1, x), kp1 = bessel_k_scaled(m + 1, x);
      const double isum = im1.value * std::exp(i.scale_exponent - im1.scale_exponent) +
                          ip1.value * std::exp(i.scale_exponent - ip1.scale_exponent);
      const double ksum = km1.value * std::exp(k.scale_exponent - km1.scale_exponent) +
                          kp1.value * std::exp(k.scale_exponent - kp1.scale_exponent);
      EXPECT_LT(rel_diff(i.derivative, 0.5 * isum), 1e-12);
      EXPECT_LT(rel_diff(k.derivative, -0.5 * ksum), 1e-12);
    }
  }
}

TEST(Specfun, Positivity) {
  for (int m : {0, 1, 2, 7, 40, 300, 2000}) {
    for (double x : kArgs) {
      const auto i = bessel_i_scaled(m, x), k = bessel_k_scaled(m, x);
      EXPECT_GT(i.value, 0.0);
      EXPECT_GT(i.derivative, 0.0);
      EXPECT_GT(k.value, 0.0);
      EXPECT_LT(k.derivative, 0.0);
    }
  }
}

TEST(Specfun, NoOverflowUpToOrder2000) {
  for (int m : {0, 1, 500, 1999, 2000}) {
    for (double x : {1e-4, 1e-2, 1.0, 1e2, 1e4}) {
      for (const auto& p : {bessel_i_scaled(m, x), bessel_k_scaled(m, x)}) {
        EXPECT_TRUE(std::isfinite(p.value) && std::isfinite(p.derivative) && std::isfinite(p.scale_exponent));
        EXPECT_NE(p.value, 0.0);
      }
    }
  }
}

TEST(Specfun, RatioRoutesAgree) {
  std::vector<double> g;
  for (double x : {1e-3, 0.7, 12.0, 300.0}) {
    i_ratios(x, 120, g);
    for (int m : {1, 2, 10, 60, 120}) EXPECT_LT(rel_diff(g[std::size_t(m)], i_ratio(m, x)), 1e-13);
  }
}

TEST(Specfun, DomainErrors) {
  EXPECT_THROW(bessel_i_scaled(0, 0.0), DomainError);
  EXPECT_THROW(bessel_k_scaled(0, -1.0), DomainError);
  EXPECT_THROW(bessel_k_scaled(0, std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(bessel_i_scaled(-1, 1.0), DomainError);
  EXPECT_THROW(bessel_i_scaled(11, 1.0, 10), DomainError);
  EXPECT_THROW(bessel_k_scaled(kDefaultMaxOrder + 1, 1.0), DomainError);
}
