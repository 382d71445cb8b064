#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpshift/plane.hpp"
#include "support.hpp"

using namespace cpshift;
using namespace cpshift::plane;
using cpshift::test::rel_diff;

TEST(Plane, ElectrostaticLimit) {
  const auto xi = xi_plane({1.0, 0.0});
  EXPECT_LT(rel_diff(xi.rho_comp, 0.125), 1e-12);
  EXPECT_LT(rel_diff(xi.phi_comp, 0.0625), 1e-12);
  EXPECT_LT(rel_diff(xi.z_comp, 0.0625), 1e-12);
}

TEST(Plane, RetardedLimit) {
  const auto xi = xi_plane({1.0, 100.0});
  for (double v : xi.values()) EXPECT_NEAR(4 * std::numbers::pi * 100.0 * v, 1.0, 1e-3);
}

TEST(Plane, Oracle) {
  const auto xi = xi_plane({1.0, 1.0});
  EXPECT_LT(rel_diff(xi.rho_comp, test::oracle("plane_d1_E1", "rho_comp")), 1e-10);
  EXPECT_LT(rel_diff(xi.phi_comp, test::oracle("plane_d1_E1", "phi_comp")), 1e-10);
  EXPECT_LT(rel_diff(xi.z_comp, test::oracle("plane_d1_E1", "z_comp")), 1e-10);
}

TEST(Plane, NonretardedClosedForm) {
  const auto a = xi_plane_nonretarded(1.0);
  EXPECT_EQ(a.rho_comp, 0.125);
  EXPECT_EQ(a.phi_comp, 0.0625);
  const auto b = xi_plane_nonretarded(2.0);
  EXPECT_EQ(b.rho_comp, 1.0 / 64);
  EXPECT_EQ(b.z_comp, 1.0 / 128);
  const auto c = xi_plane_nonretarded(10.0);
  EXPECT_LT(rel_diff(c.rho_comp, 1.25e-4), 1e-15);
  EXPECT_LT(rel_diff(c.phi_comp, 6.25e-5), 1e-15);
}

TEST(Plane, RetardedClosedForm) {
  const double pi = std::numbers::pi;
  EXPECT_LT(rel_diff(xi_plane_retarded(1.0, 1.0).rho_comp, 1.0 / (4 * pi)), 1e-15);
  EXPECT_LT(rel_diff(xi_plane_retarded(2.0, 1.0).phi_comp, 1.0 / (64 * pi)), 1e-15);
  EXPECT_LT(rel_diff(xi_plane_retarded(1.0, 10.0).z_comp, 1.0 / (40 * pi)), 1e-15);
  EXPECT_THROW(xi_plane_retarded(1.0, 0.0), DomainError);
}

TEST(Plane, SmallRetardationMatchesElectrostatics) {
  const auto xi = xi_plane({1.0, 1e-4});
  const auto nr = xi_plane_nonretarded(1.0);
  for (int c = 0; c < 3; ++c) EXPECT_LT(rel_diff(xi.values()[c], nr.values()[c]), 1e-3);
}

TEST(Plane, ParallelBelowNormal) {
  for (double de : {0.0, 0.01, 0.3, 1.0, 5.0, 100.0}) {
    const auto xi = xi_plane({1.0, de});
    EXPECT_LE(xi.phi_comp, xi.rho_comp);
    EXPECT_EQ(xi.phi_comp, xi.z_comp);
  }
}

TEST(Plane, Validation) {
  EXPECT_THROW(xi_plane({0.0, 1.0}), DomainError);
  EXPECT_THROW(xi_plane({1.0, -1.0}), DomainError);
  EXPECT_THROW(xi_plane_nonretarded(-2.0), DomainError);
}
