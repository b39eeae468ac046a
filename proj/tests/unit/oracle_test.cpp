#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zonal/oracle.hpp"

namespace zonal {
namespace {

using test::pi;

TEST(Legendre, KnownValues) {
  EXPECT_EQ(legendre_p(0, 0.3), 1.0);
  EXPECT_EQ(legendre_p(1, 0.3), 0.3);
  EXPECT_NEAR(legendre_p(2, 0.3), 0.5 * (3 * 0.09 - 1), 1e-16);
  EXPECT_NEAR(legendre_p(3, 0.3), 0.5 * (5 * 0.027 - 3 * 0.3), 1e-16);
  for (int n = 0; n <= 60; ++n) EXPECT_NEAR(legendre_p(n, 1.0), 1.0, 1e-13) << n;
}

TEST(GaussLegendre, ExactForPolynomials) {
  const auto& rule = gauss_legendre_rule(10);
  ASSERT_EQ(rule.size(), 10u);
  double w = 0, x18 = 0;
  for (const auto& [x, wt] : rule) {
    w += wt;
    x18 += wt * std::pow(x, 18);
  }
  EXPECT_NEAR(w, 2.0, 1e-14);
  EXPECT_NEAR(x18, 2.0 / 19.0, 1e-14);
}

TEST(Quadrature, TrueAnomalyMeans) {
  EXPECT_NEAR(average_over_true_anomaly([](double f) { return std::cos(f) * std::cos(f); }, 2), 0.5, 1e-15);
  EXPECT_NEAR(average_over_true_anomaly([](double f) { return std::cos(3 * f); }, 3), 0.0, 1e-15);
  EXPECT_NEAR(average_over_true_anomaly([](double f) { return std::cos(f) * std::cos(f); }, 2, QuadratureRule::gauss_legendre),
              0.5, 1e-14);
}

TEST(Quadrature, MeanAnomalyMeans) {
  const OrbitGeometry g(1.0, 0.6, 1.0);
  EXPECT_NEAR(average_over_mean_anomaly([](double) { return 1.0; }, g, 8), 1.0, 1e-14);
  EXPECT_NEAR(average_over_mean_anomaly([&](double f) { return g.a() / g.radius(f); }, g, 8), 1.0, 1e-14);
  // <(a/r)^2> over l is 1/eta
  EXPECT_NEAR(average_over_mean_anomaly([&](double f) { return std::pow(g.a() / g.radius(f), 2); }, g, 8), 1.0 / g.eta(),
              1e-14);
}

TEST(Coordinates, PositionMagnitudeAndLatitude) {
  const OrbitGeometry g(3000.0, 0.2, 0.7);
  const auto p = keplerian_to_cartesian(g, 0.3, 1.1, 0.5);
  const double r = std::hypot(p[0], p[1], p[2]);
  EXPECT_NEAR(r, g.radius(0.5), 1e-10);
  EXPECT_NEAR(p[2], r * g.s() * std::sin(1.6), 1e-10);
  const SphericalPoint sp = keplerian_to_spherical(g, 0.3, 1.1, 0.5);
  EXPECT_NEAR(std::sin(sp.latitude), g.s() * std::sin(1.6), 1e-14);
}

TEST(DirectPotential, EquatorialSecondDegree) {
  const GravityField f("j2", 1.0, 1.0, {1.0, 0.0, -1e-3});
  const SphericalPoint p{2.0, 0.0, 0.4};
  EXPECT_NEAR(direct_potential(f, p), -0.5 * (1 + 0.25 * -1e-3 * -0.5), 1e-16);
  const SphericalPoint pole{2.0, pi / 2, 0.0};
  EXPECT_NEAR(direct_potential(f, pole), -0.5 * (1 + 0.25 * -1e-3), 1e-16);
}

TEST(ElementPotential, MatchesDirectEvaluation) {
  const GravityField& f = *test::moon();
  const OrbitGeometry g(2600.0, 0.3, 1.2);
  for (double anomaly : {0.0, 1.0, 3.0}) {
    const double direct = direct_potential(f, keplerian_to_spherical(g, 0.2, 0.9, anomaly));
    EXPECT_NEAR(element_potential(f, g, 0.9, anomaly), direct, 1e-14 * std::abs(direct));
  }
}

TEST(Bracket, CanonicalPairs) {
  const DelaunayState x = DelaunayState::from_elements(1.0, 1.0, 0.2, 0.8, 0.3, 0.4, 0.5);
  auto ell = [](const DelaunayState& y) { return y.ell; };
  auto L = [](const DelaunayState& y) { return y.L; };
  auto H = [](const DelaunayState& y) { return y.H; };
  auto g = [](const DelaunayState& y) { return y.g; };
  EXPECT_NEAR(finite_difference_poisson_bracket(ell, L, x).value, 1.0, 1e-10);
  EXPECT_NEAR(finite_difference_poisson_bracket(L, ell, x).value, -1.0, 1e-10);
  EXPECT_NEAR(finite_difference_poisson_bracket(g, H, x).value, 0.0, 1e-10);
  auto prod = [](const DelaunayState& y) { return y.g * y.G; };
  EXPECT_NEAR(finite_difference_poisson_bracket(prod, g, x).value, -x.g, 1e-8);
  EXPECT_NEAR(finite_difference_partial(prod, x, 4), x.g, 1e-8);
}

TEST(FourierFit, RejectsDegreeAboveSixty) {
  EXPECT_ANY_THROW(fourier_fit_inclination(61, 0, 0.5));
}

}  // namespace
}  // namespace zonal
