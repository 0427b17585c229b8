#include "mzm/specfun.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

using namespace mzm::specfun;

namespace {

double rel(double got, double want) { return std::fabs(got - want) / std::max(1e-300, std::fabs(want)); }

}  // namespace

TEST(Bessel, ValuesAtOrigin) {
  EXPECT_EQ(bessel_j0(0.0).value, 1.0);
  EXPECT_EQ(bessel_j1(0.0).value, 0.0);
  EXPECT_EQ(bessel_i0(0.0).value, 1.0);
  EXPECT_EQ(bessel_i1(0.0).value, 0.0);
}

TEST(Bessel, ReferenceValues) {
  // Tabulated values, 15 digits.
  EXPECT_LT(rel(bessel_j0(1.0).value, 0.765197686557966551), 1e-14);
  EXPECT_LT(rel(bessel_j1(1.0).value, 0.440050585744933516), 1e-14);
  EXPECT_LT(rel(bessel_y0(1.0).value, 0.088256964215676958), 1e-13);
  EXPECT_LT(rel(bessel_y1(1.0).value, -0.781212821300288717), 1e-13);
  EXPECT_LT(rel(bessel_i0(1.0).value, 1.266065877752008336), 1e-14);
  EXPECT_LT(rel(bessel_i1(1.0).value, 0.565159103992485027), 1e-14);
  EXPECT_LT(rel(bessel_k0(1.0).value, 0.421024438240708333), 1e-13);
  EXPECT_LT(rel(bessel_k1(1.0).value, 0.601907230197234575), 1e-13);
  EXPECT_LT(rel(bessel_j0(10.0).value, -0.245935764451348335), 1e-12);
  EXPECT_LT(rel(bessel_y0(10.0).value, 0.055671167283599392), 1e-11);
  EXPECT_LT(rel(bessel_j1(30.0).value, -0.118751062616623), 1e-12);
  EXPECT_LT(rel(bessel_k0(10.0).value, 1.778006231616765e-05), 1e-13);
}

TEST(Bessel, SeriesOracleAgreement) {
  for (double x = 0.0; x <= 20.0; x += 0.173) {
    const double want = static_cast<double>(oracle::j0_series(x));
    EXPECT_NEAR(bessel_j0(x).value, want, 1e-11) << "x = " << x;
  }
}

TEST(Bessel, FirstZeroOfJ0) {
  const double x0 = 2.404825557695773;
  EXPECT_NEAR(static_cast<double>(oracle::j0_first_zero()), x0, 1e-15);
  EXPECT_LT(std::fabs(bessel_j0(x0).value), 1e-10);
}

TEST(Bessel, K0MatchesIntegralRepresentation) {
  for (double x : {0.05, 0.5, 1.0, 3.0, 7.5, 20.0}) {
    const double want = oracle::k0_integral(x);
    EXPECT_LT(std::fabs(bessel_k0(x).value - want), 1e-10 * std::max(1.0, want)) << "x = " << x;
  }
}

TEST(Bessel, WronskianIdentities) {
  for (int i = 0; i <= 2000; ++i) {
    const double x = 0.1 + (50.0 - 0.1) * i / 2000.0;
    const double w = bessel_j0(x).value * -bessel_y1(x).value + bessel_j1(x).value * bessel_y0(x).value;
    EXPECT_LT(rel(w, 2.0 / (std::numbers::pi * x)), 1e-9) << "x = " << x;
    const double mw = -bessel_i0(x).value * bessel_k1(x).value - bessel_i1(x).value * bessel_k0(x).value;
    EXPECT_LT(rel(mw, -1.0 / x), 1e-9) << "x = " << x;
  }
}

TEST(Bessel, OrderZeroOdeResidual) {
  // f'' = -f'/x -/+ f, with f'' from a five-point difference of f' = -J1, -Y1, I1, -K1.
  const double h = 1e-3;
  auto d = [h](auto&& g, double x) { return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h); };
  auto j1 = [](double x) { return bessel_j1(x).value; };
  auto y1 = [](double x) { return bessel_y1(x).value; };
  auto i1 = [](double x) { return bessel_i1_scaled(x).value * std::exp(x - 0.5); };
  auto k1 = [](double x) { return bessel_k1_scaled(x).value * std::exp(0.5 - x); };
  for (double x = 0.5; x <= 45.0; x += 0.37) {
    EXPECT_NEAR(-d(j1, x) - j1(x) / x + bessel_j0(x).value, 0.0, 1e-7) << x;
    EXPECT_NEAR(-d(y1, x) - y1(x) / x + bessel_y0(x).value, 0.0, 1e-7) << x;
    // Modified functions are rescaled by exp(-+(x - 0.5)) so the check stays relative.
    const double i_res = d(i1, x) + i1(x) / x - bessel_i0_scaled(x).value * std::exp(x - 0.5);
    EXPECT_LT(std::fabs(i_res) / (std::exp(x - 0.5) * bessel_i0_scaled(x).value), 1e-7) << x;
    const double k_res = -d(k1, x) - k1(x) / x - bessel_k0_scaled(x).value * std::exp(0.5 - x);
    EXPECT_LT(std::fabs(k_res) / (std::exp(0.5 - x) * bessel_k0_scaled(x).value), 1e-7) << x;
  }
}

TEST(Bessel, ContinuityAcrossRegimeBoundaries) {
  for (double x : {detail::kKSeriesCrossover, detail::kSeriesCrossover, detail::kModifiedAsymptotic,
                   detail::kAsymptoticCrossover}) {
    const double lo = std::nextafter(x, 0.0), hi = std::nextafter(x, 100.0);
    EXPECT_NEAR(bessel_j0(lo).value, bessel_j0(hi).value, 1e-12);
    EXPECT_NEAR(bessel_j1(lo).value, bessel_j1(hi).value, 1e-12);
    EXPECT_NEAR(bessel_y0(lo).value, bessel_y0(hi).value, 1e-12);
    EXPECT_NEAR(bessel_y1(lo).value, bessel_y1(hi).value, 1e-12);
    EXPECT_LT(rel(bessel_i0_scaled(lo).value, bessel_i0_scaled(hi).value), 1e-12);
    EXPECT_LT(rel(bessel_k1_scaled(lo).value, bessel_k1_scaled(hi).value), 1e-12);
  }
}

TEST(Bessel, K0AsymptoticDecay) {
  // K0(x) e^x sqrt(x) -> sqrt(pi / 2) with a 1 / (8x) correction; compare against the
  // first four terms of the asymptotic series, whose remainder is below 2e-7 for x >= 30.
  for (double x = 30.0; x <= 300.0; x += 10.0) {
    const double z = 1.0 / x;
    const double series =
        std::sqrt(std::numbers::pi / 2.0) * (1.0 - z / 8.0 + 9.0 * z * z / 128.0 - 225.0 * z * z * z / 3072.0);
    EXPECT_LT(rel(bessel_k0_scaled(x).value * std::sqrt(x), series), 1e-6) << x;
  }
  EXPECT_GT(std::fabs(bessel_k0_scaled(30.0).value * std::sqrt(30.0) - std::sqrt(std::numbers::pi / 2.0)), 1e-3);
}

TEST(Bessel, ErrorBoundsAreSmall) {
  for (double x = 1e-8; x <= 50.0; x *= 1.7) {
    for (auto r : {bessel_j0(x), bessel_j1(x), bessel_y0(x), bessel_y1(x), bessel_i0(x), bessel_i1(x), bessel_k0(x),
                   bessel_k1(x)}) {
      EXPECT_GE(r.est_error, 0.0);
      EXPECT_LE(r.est_error, 1e-10 * std::max(1.0, std::fabs(r.value)));
    }
  }
}

TEST(Bessel, DomainErrors) {
  EXPECT_THROW(bessel_j0(-1.0), std::domain_error);
  EXPECT_THROW(bessel_j0(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_THROW(bessel_i1(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  EXPECT_THROW(bessel_y0(0.0), std::domain_error);
  EXPECT_THROW(bessel_y1(5e-9), std::domain_error);
  EXPECT_THROW(bessel_k0(0.0), std::domain_error);
  EXPECT_THROW(bessel_k1(-2.0), std::domain_error);
  EXPECT_NO_THROW(bessel_k0(kMinSingularArgument));
  EXPECT_TRUE(std::isfinite(bessel_y0(kMinSingularArgument).value));
  EXPECT_THROW(bessel_i0(800.0), std::overflow_error);
  EXPECT_NO_THROW(bessel_i0_scaled(800.0));
}
