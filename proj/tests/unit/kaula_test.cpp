#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "zonal/hamiltonian.hpp"
#include "zonal/kaula.hpp"
#include "zonal/oracle.hpp"

namespace zonal {
namespace {

using test::pi;

TEST(IndexSet, ParityBookkeeping) {
  const IndexSet a = index_set(5, 1);
  EXPECT_EQ(a.i_star, 1);
  EXPECT_DOUBLE_EQ(a.i_pi, pi / 2);
  EXPECT_EQ(a.i_m, 2);
  EXPECT_EQ(a.i_m_star, 3);
  const IndexSet b = index_set(4, 2);
  EXPECT_EQ(b.i_star, 0);
  EXPECT_EQ(b.i_pi, 0.0);
  EXPECT_EQ(b.i_m, 1);
  EXPECT_EQ(floor_div(-3, 2), -2);
  EXPECT_EQ(floor_div(3, 2), 1);
}

TEST(OrbitGeometry, DerivedQuantities) {
  const OrbitGeometry g(2000.0, 0.6, 1.0);
  EXPECT_DOUBLE_EQ(g.eta(), 0.8);
  EXPECT_NEAR(g.p(), 2000.0 * 0.64, 1e-12);
  EXPECT_DOUBLE_EQ(g.s(), std::sin(1.0));
  EXPECT_NEAR(g.radius(0.0), 800.0, 1e-12);
  EXPECT_NEAR(g.radius(pi), 3200.0, 1e-9);
}

TEST(InclinationFunction, EquatorialValuesAreLegendreAtZero) {
  EXPECT_NEAR(inclination_function(2, 1, 0.0), -0.5, 1e-16);
  EXPECT_NEAR(inclination_function(4, 2, 0.0), 3.0 / 8.0, 1e-16);
  EXPECT_NEAR(inclination_function(6, 3, 0.0), -5.0 / 16.0, 1e-16);
  EXPECT_EQ(inclination_function(4, 0, 0.0), 0.0);
}

TEST(InclinationFunction, RecurrenceMatchesExplicitSumAndProjection) {
  for (double s : {0.05, 0.3, 0.7071, 0.99}) {
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= i; ++j)
        EXPECT_NEAR(inclination_function(i, j, s), inclination_function_direct(i, j, s), 1e-13) << i << ' ' << j;
    const InclinationTable F(40, s);
    for (int i = 0; i <= 40; i += 3)
      for (int j = 0; j <= i; ++j) EXPECT_NEAR(F(i, j), fourier_fit_inclination(i, j, s), 1e-13) << i << ' ' << j;
  }
}

TEST(InclinationFunction, ReconstructsLegendrePolynomial) {
  const double s = 0.8;
  const int i = 9;
  const IndexSet ix = index_set(i, 0);
  for (double theta : {0.1, 1.3, 2.9, -2.2}) {
    double sum = 0;
    for (int j = 0; j <= i; ++j) sum += inclination_function(i, j, s) * std::cos((i - 2 * j) * theta - ix.i_pi);
    EXPECT_NEAR(sum, legendre_p(i, s * std::sin(theta)), 1e-14);
  }
}

TEST(InclinationTable, DerivativeMatchesFiniteDifference) {
  const double s = 0.6, h = 1e-6;
  const InclinationTable F(20, s, true), up(20, s + h), down(20, s - h);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= i; ++j)
      EXPECT_NEAR(F.derivative(i, j), (up(i, j) - down(i, j)) / (2 * h), 1e-7) << i << ' ' << j;
}

TEST(CosPowerReduction, ProductToSum) {
  using T = PowerReductionTerm;
  EXPECT_EQ(cos_power_reduction(2, 0), (std::vector<T>{{-2, 0.25}, {0, 0.5}, {2, 0.25}}));
  EXPECT_EQ(cos_power_reduction(1, 3), (std::vector<T>{{2, 0.5}, {4, 0.5}}));
  EXPECT_EQ(cos_power_reduction(0, 5), (std::vector<T>{{5, 1.0}}));
}

TEST(AveragedVi, ClassicalSecondDegreeMean) {
  const GravityField& f = *test::moon();
  for (double e : {0.0, 0.3, 0.85}) {
    const OrbitGeometry g(2500.0, e, 1.2);
    const double ratio = f.reference_radius() / g.a();
    const double expected = f.zonal(2) * ratio * ratio * std::pow(g.eta(), -3) * (0.75 * g.s() * g.s() - 0.5);
    EXPECT_NEAR(averaged_vi(f, 2, g, 0.4), expected, 1e-15 * std::abs(expected)) << e;
    EXPECT_NEAR(averaged_vi(f, 2, g, 0.4), averaged_vi(f, 2, g, 2.0), 1e-20);
  }
}

TEST(AveragedVi, MatchesQuadratureAtHighEccentricity) {
  const GravityField& f = *test::moon();
  const OrbitGeometry g(4000.0, 0.9, 1.4);
  for (int i : {2, 3, 7, 20, 33, 50}) {
    const InclinationTable F(i, g.s());
    const double quad = average_over_true_anomaly([&](double t) { return osculating_vi(f, i, g, 0.7, t, F); }, 2 * i);
    const double size = average_over_true_anomaly([&](double t) { return std::abs(osculating_vi(f, i, g, 0.7, t, F)); }, 2 * i);
    EXPECT_LE(std::abs(averaged_vi(f, i, g, 0.7) - quad), 1e-12 * size) << i;
  }
}

TEST(AveragedVi, OddDegreesVanishOnCircularOrbits) {
  const GravityField& f = *test::moon();
  const OrbitGeometry g(2500.0, 0.0, 1.0);
  for (int i : {3, 5, 11}) EXPECT_EQ(averaged_vi(f, i, g, 0.3), 0.0);
}

TEST(MeanSeries, TermCountFormula) {
  EXPECT_EQ(mean_series_term_count(2), 1u);
  EXPECT_EQ(mean_series_term_count(3), 2u);
  EXPECT_EQ(mean_series_term_count(4), 4u);
  EXPECT_EQ(mean_series_term_count(50), 625u);
  std::size_t sum = 0;
  for (int i = 2; i <= 37; ++i) sum += static_cast<std::size_t>((i - 2) / 2 + 1);
  EXPECT_EQ(mean_series_term_count(37), sum);
  EXPECT_EQ(build_mean_series(*test::moon(), 50).size(), 625u);
  EXPECT_EQ(build_mean_series(GravityField::kepler(1.0, 1.0, 50), 50).size(), 625u);
}

TEST(MeanSeries, MatchesPerDegreeAverages) {
  const GravityField& f = *test::moon();
  const AveragedSeries s = build_mean_series(f, 30);
  const OrbitGeometry g(2200.0, 0.2, 1.0);
  const std::vector<double> per = s.evaluate_by_degree(g, -1.1);
  double total = 0, scale = 0;
  for (int i = 2; i <= 30; ++i) {
    const double direct = averaged_vi(f, i, g, -1.1);
    EXPECT_NEAR(per[static_cast<std::size_t>(i)], direct, 1e-14 * std::abs(direct) + 1e-30) << i;
    total += per[static_cast<std::size_t>(i)];
    scale += std::abs(direct);
  }
  EXPECT_NEAR(s.evaluate(g, -1.1), total, 1e-15 * scale);
}

TEST(MeanSeries, ExtendEqualsFreshBuild) {
  const GravityField& f = *test::moon();
  AveragedSeries grown;
  for (int n : {2, 5, 9, 20}) grown.extend(f, n);
  const AveragedSeries fresh = build_mean_series(f, 20);
  ASSERT_EQ(grown.size(), fresh.size());
  const OrbitGeometry g(2300.0, 0.15, 0.9);
  EXPECT_EQ(grown.evaluate(g, 0.3), fresh.evaluate(g, 0.3));
}

TEST(MeanSeries, PartialsMatchFiniteDifferences) {
  const AveragedSeries s = build_mean_series(*test::moon(), 25);
  const double a = 2300.0, e = 0.12, inc = 1.05, w = 0.8, h = 1e-6;
  const OrbitGeometry g(a, e, inc);
  const SeriesPartials p = s.evaluate_partials(g, w);
  EXPECT_NEAR(p.value, s.evaluate(g, w), 1e-18);
  auto at = [&](double ee, double ss, double ww) {
    return s.evaluate(OrbitGeometry::from_sin_cos(a, ee, ss, std::sqrt(1 - ss * ss)), ww);
  };
  const double sv = g.s();
  const double scale = std::abs(p.value);
  EXPECT_NEAR(p.d_e, (at(e + h, sv, w) - at(e - h, sv, w)) / (2 * h), 1e-7 * scale);
  EXPECT_NEAR(p.d_s, (at(e, sv + h, w) - at(e, sv - h, w)) / (2 * h), 1e-7 * scale);
  EXPECT_NEAR(p.d_omega, (at(e, sv, w + h) - at(e, sv, w - h)) / (2 * h), 1e-7 * scale);
  EXPECT_NEAR(p.d_omega_over_e * e, p.d_omega, 1e-14 * scale);
}

TEST(MeanSeries, OmegaDerivativeOverEIsRegularAtZero) {
  const AveragedSeries s = build_mean_series(*test::moon(), 15);
  const SeriesPartials at0 = s.evaluate_partials(OrbitGeometry(2300.0, 0.0, 1.0), 0.4);
  const SeriesPartials near = s.evaluate_partials(OrbitGeometry(2300.0, 1e-7, 1.0), 0.4);
  EXPECT_TRUE(std::isfinite(at0.d_omega_over_e));
  EXPECT_EQ(at0.d_omega, 0.0);
  EXPECT_NEAR(at0.d_omega_over_e, near.d_omega_over_e, 1e-5 * std::abs(at0.d_omega_over_e) + 1e-20);
}

}  // namespace
}  // namespace zonal
