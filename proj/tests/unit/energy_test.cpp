#include <gtest/gtest.h>

#include <cmath>

#include "qdiel/errors.hpp"
#include "qdiel/energy.hpp"

using namespace qdiel;

namespace {

Medium medium(double wp, double g) { return Medium(MediumParams{1.0, wp, g, 0.0}); }

}  // namespace

TEST(Energy, FinalFormMatchesReference) {
  struct Case {
    double wp, g, expected;
  };
  for (const Case& c : {Case{0.5, 0.1, 79149.26933177447}, Case{1.0, 0.01, 79125.37108827285},
                        Case{0.1, 0.5, 79156.85840376547}}) {
    const Medium m = medium(c.wp, c.g);
    EXPECT_NEAR(total_density_direct(m) / c.expected, 1.0, 1e-9) << c.wp << " " << c.g;
  }
}

TEST(Energy, VacuumReduction) {
  const Medium m = medium(0.0, 0.1);
  const EnergyReport r = total_energy_density(m);
  const double vac = vacuum_density(50.0);
  EXPECT_NEAR(r.w_total / vac, 1.0, 1e-12);
  EXPECT_NEAR(r.w_mode_sum / vac, 1.0, 1e-12);
  EXPECT_EQ(r.w1_secular_coeff, 0.0);
  EXPECT_EQ(r.w2_secular_coeff, 0.0);
  EXPECT_EQ(r.w2_stationary, 0.0);
  // Electric half of the free-field density.
  EXPECT_NEAR(w1_density(m).stationary_electric / vac, 0.5, 1e-12);
  EXPECT_FALSE(r.anomalous_dispersion);
}

TEST(Energy, SecularTermsCancelOnSharedNodes) {
  const Medium m = medium(0.5, 0.1);
  const W1Density w1 = w1_density(m);
  const W2Density shared = w2_density(m, {}, &w1.secular_panels);
  EXPECT_GT(w1.secular, 0.0);
  EXPECT_LE(std::abs(w1.secular + shared.secular), 1e-12 * w1.secular);
  const W2Density independent = w2_density(m);
  EXPECT_LE(std::abs(w1.secular + independent.secular), 1e-8 * w1.secular);
}

TEST(Energy, RoutesAgree) {
  const EnergyReport r = total_energy_density(medium(0.5, 0.1));
  EXPECT_NEAR(r.w_total / 79149.26933177447, 1.0, 1e-9);
  EXPECT_LT(r.identity_residual, 1e-10);
  EXPECT_LT(r.route_residual, 1e-10);
  EXPECT_LT(r.mode_direct_residual, 1e-10);
  EXPECT_LT(r.decomposition_residual, 1e-8);
  EXPECT_LT(r.brace_residual_max, 1e-10);
  EXPECT_TRUE(r.anomalous_dispersion);
  EXPECT_LT(r.min_group_factor, 0.0);
  EXPECT_NEAR(r.omega_at_min, 1.015, 0.01);
}

TEST(Energy, QuadratureRouteAgreesWithClosedForm) {
  const Medium m = medium(0.5, 0.1);
  EnergyOptions opt;
  opt.route = KRoute::quadrature;
  const W1Density q = w1_density(m, opt);
  const W1Density c = w1_density(m);
  EXPECT_NEAR(q.stationary() / c.stationary(), 1.0, 1e-8);
  EXPECT_NEAR(q.secular / c.secular, 1.0, 1e-8);
  const W2Density q2 = w2_density(m, opt, &q.secular_panels);
  EXPECT_LE(std::abs(q.secular + q2.secular), 1e-8 * q.secular);
}

TEST(Energy, SelfConvergenceUnderTighterTolerance) {
  const Medium m = medium(0.5, 0.1);
  EnergyOptions loose;
  loose.quad.rel_tol = 1e-9;
  EnergyOptions tight;
  tight.quad.rel_tol = 1e-10;
  const double a = total_energy_density(m, loose).w_total;
  const double b = total_energy_density(m, tight).w_total;
  EXPECT_NEAR(a / b, 1.0, 1e-8);
}

TEST(Energy, BraceIdentityPointwise) {
  const Medium m = medium(1.0, 0.5);
  for (double w : {0.01, 0.5, 0.99, 1.0, 1.3, 1.41, 5.0, 49.0}) {
    const BraceIdentity b = brace_identity(m, w);
    EXPECT_LT(b.residual, 1e-12) << w;
  }
}

TEST(Energy, TruncationBelowTheBand) {
  EnergyOptions opt;
  opt.omega_max = 2.0;
  EXPECT_THROW(total_energy_density(medium(0.5, 0.1), opt), TruncationError);
}

TEST(Energy, MonotoneInBandEdge) {
  const Medium m = medium(0.5, 0.1);
  double last = 0.0;
  for (double top : {5.0, 10.0, 20.0}) {
    EnergyOptions opt;
    opt.omega_max = top;
    const double w = total_density_direct(m, opt);
    EXPECT_GT(w, last);
    last = w;
  }
}
