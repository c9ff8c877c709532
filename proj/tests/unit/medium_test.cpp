#include <gtest/gtest.h>

#include <cmath>

#include "qdiel/errors.hpp"
#include "qdiel/medium.hpp"

using namespace qdiel;

namespace {

Medium standard() { return Medium(MediumParams{1.0, 0.5, 0.1, 0.0}); }

std::string field_of(const MediumParams& p) {
  try {
    Medium m(p);
  } catch (const InvariantError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Medium, PermittivityAtResonanceIsPurelyAbsorptive) {
  // 1 - 0.25 / (0.1 i) = 1 + 2.5 i
  const cdouble eps = permittivity(standard(), 1.0);
  EXPECT_DOUBLE_EQ(eps.real(), 1.0);
  EXPECT_DOUBLE_EQ(eps.imag(), 2.5);
}

TEST(Medium, RefractiveIndexMatchesReference) {
  const ComplexIndex n = refractive_index(standard(), 1.0);
  EXPECT_NEAR(n.n_r, 1.358782985536552, 1e-14);
  EXPECT_NEAR(n.n_i, 0.9199408686342976, 1e-14);
}

TEST(Medium, StaticLimit) {
  const Medium m = standard();
  EXPECT_DOUBLE_EQ(static_permittivity(m), 1.25);
  EXPECT_NEAR(permittivity(m, 1e-8).real(), 1.25, 1e-12);
}

TEST(Medium, VacuumHasUnitIndex) {
  const Medium m(MediumParams{1.0, 0.0, 0.1, 0.0});
  for (double w : {0.01, 1.0, 100.0}) {
    EXPECT_EQ(permittivity(m, w), cdouble(1.0, 0.0));
    EXPECT_EQ(refractive_index(m, w).n_r, 1.0);
  }
}

TEST(Medium, DerivativesMatchFiniteDifferences) {
  const Medium m = standard();
  // Five-point stencil, error O(h^4).
  auto diff = [](auto f, double w) {
    const double h = 1e-4 * w;
    return (f(w - 2 * h) - 8.0 * f(w - h) + 8.0 * f(w + h) - f(w + 2 * h)) / (12.0 * h);
  };
  for (double w : {0.3, 0.97, 1.0, 1.05, 2.0, 10.0}) {
    const cdouble fd_eps = diff([&](double x) { return permittivity(m, x); }, w);
    EXPECT_LT(std::abs(permittivity_derivative(m, w) - fd_eps), 1e-8 * std::abs(fd_eps)) << w;

    const cdouble fd_n = diff([&](double x) { return refractive_index(m, x).value(); }, w);
    EXPECT_LT(std::abs(refractive_index_derivative(m, w) - fd_n), 1e-8 * std::abs(fd_n)) << w;
    EXPECT_NEAR(d_omega_n_r(m, w), fd_n.real(), 1e-8 * std::abs(fd_n)) << w;

    const double fd_we = diff([&](double x) { return x * permittivity(m, x).real(); }, w);
    EXPECT_NEAR(d_omega_omega_eps_r(m, w), fd_we, 1e-8 * std::abs(fd_we)) << w;
  }
  // High-precision reference at 1.05.
  EXPECT_NEAR(d_omega_omega_eps_r(m, 1.05), 0.411839796427796537, 1e-13);
  EXPECT_NEAR(d_omega_n_r(m, 1.05), -8.1766245115998010, 1e-13);
}

TEST(Medium, ImaginaryPartKeepsRelativePrecisionFarFromResonance) {
  const Medium m = standard();
  // eps_I = wp^2 g w / ((w^2 - w0^2)^2 + g^2 w^2)
  const double w = 1e4;
  const double expected = 0.25 * 0.1 * w / (std::pow(w * w - 1.0, 2) + 0.01 * w * w);
  EXPECT_NEAR(permittivity(m, w).imag() / expected, 1.0, 1e-14);
}

TEST(Medium, LongitudinalFrequency) {
  EXPECT_DOUBLE_EQ(standard().longitudinal_frequency(), std::sqrt(1.25));
}

TEST(Medium, PassiveSqrtBranch) {
  EXPECT_GE(passive_sqrt(cdouble(-1.0, -1e-300)).imag(), 0.0);
  EXPECT_GE(passive_sqrt(cdouble(-4.0, 0.0)).imag(), 0.0);
  EXPECT_NEAR(passive_sqrt(cdouble(-4.0, 0.0)).imag(), 2.0, 1e-15);
  EXPECT_EQ(passive_sqrt(cdouble(4.0, 0.0)), cdouble(2.0, 0.0));
}

TEST(Medium, InvalidParametersNameTheField) {
  EXPECT_EQ(field_of({0.0, 0.5, 0.1, 0.0}), "omega0");
  EXPECT_EQ(field_of({1.0, -0.5, 0.1, 0.0}), "omega_p");
  EXPECT_EQ(field_of({1.0, 0.5, 0.0, 0.0}), "gamma");
  EXPECT_EQ(field_of({1.0, 0.5, 0.1, -1.0}), "temperature");
  EXPECT_EQ(field_of({1.0, 0.5, 0.1, 0.0}), "");
}

TEST(Medium, NonPositiveFrequencyIsADomainError) {
  EXPECT_THROW(permittivity(standard(), 0.0), DomainError);
  EXPECT_THROW(refractive_index(standard(), -1.0), DomainError);
}
