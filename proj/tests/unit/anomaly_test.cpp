#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zonal/anomaly.hpp"

namespace zonal {
namespace {

constexpr double pi = std::numbers::pi;

TEST(Kepler, ResidualBelowRoundoff) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> m(-50, 50), ecc(0, 0.99);
  for (int k = 0; k < 20000; ++k) {
    const double M = m(rng), e = ecc(rng);
    const double E = solve_kepler(M, e);
    EXPECT_NEAR(E - e * std::sin(E), M, 4e-14);
  }
}

TEST(Kepler, CircularOrbitIsIdentity) {
  for (double M : {-3.0, 0.0, 0.5, 7.0}) {
    EXPECT_EQ(solve_kepler(M, 0.0), M);
    EXPECT_NEAR(std::remainder(true_from_mean(M, 0.0) - M, 2 * pi), 0.0, 1e-15);
  }
}

TEST(Anomalies, RoundTrips) {
  for (double e : {0.0, 0.1, 0.5, 0.9}) {
    for (double f = -3.0; f < 3.1; f += 0.37) {
      EXPECT_NEAR(true_from_eccentric(eccentric_from_true(f, e), e), f, 1e-13);
      EXPECT_NEAR(std::remainder(true_from_mean(mean_from_true(f, e), e) - f, 2 * pi), 0.0, 1e-12);
    }
  }
}

TEST(Anomalies, PeriapsisAndApoapsis) {
  EXPECT_NEAR(true_from_mean(0.0, 0.7), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(true_from_mean(pi, 0.7)), pi, 1e-12);
  EXPECT_NEAR(mean_from_true(pi / 2, 0.0), pi / 2, 1e-15);
}

TEST(AnomalySet, ConsistentFields) {
  const AnomalySet a = AnomalySet::from_mean(1.2, 0.4, 0.5);
  EXPECT_NEAR(a.E - 0.4 * std::sin(a.E), 1.2, 1e-14);
  EXPECT_NEAR(a.theta, a.f + 0.5, 1e-15);
  EXPECT_NEAR(a.center, a.f - a.M, 1e-15);
  const AnomalySet b = AnomalySet::from_true(a.f, 0.4, 0.5);
  EXPECT_NEAR(b.M, a.M, 1e-13);
}

}  // namespace
}  // namespace zonal
