#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zonal/errors.hpp"
#include "zonal/hamiltonian.hpp"

namespace zonal {
namespace {

GravityField earth_like() {
  return GravityField("earth-like", 398600.4418, 6378.137, {1.0, 0.0, -1.08262668e-3, 2.53265649e-6, 1.61962159e-6});
}

TEST(ModelSpec, DefaultsFollowFieldShape) {
  EXPECT_FALSE(prefers_j2sq(*test::moon()));
  EXPECT_TRUE(prefers_j2sq(earth_like()));
  EXPECT_FALSE(prefers_j2sq(GravityField::kepler(1.0, 1.0, 4)));
  const MeanModelSpec s = MeanModelSpec::defaults(test::moon());
  EXPECT_EQ(s.n_max, 50);
  EXPECT_FALSE(s.include_j2sq);
}

TEST(ModelSpec, ValidationRejectsInconsistentSpecs) {
  MeanModelSpec s = MeanModelSpec::defaults(test::moon(), 10);
  s.disabled_degrees = {11};
  EXPECT_THROW(s.validate(), DomainError);
  s.disabled_degrees = {};
  s.include_centering = true;
  EXPECT_THROW(s.validate(), DomainError);
  s.include_j2sq = true;
  EXPECT_NO_THROW(s.validate());
  s.n_max = 51;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Delaunay, ElementsRoundTrip) {
  const double mu = 4902.8;
  const DelaunayState x = DelaunayState::from_elements(mu, 2400.0, 0.3, 1.1, 0.2, 0.5, 0.9);
  EXPECT_NEAR(x.a(mu), 2400.0, 1e-9);
  EXPECT_NEAR(x.e(), 0.3, 1e-14);
  EXPECT_NEAR(x.cos_inclination(), std::cos(1.1), 1e-14);
  EXPECT_NEAR(x.mean_motion(mu), std::sqrt(mu / std::pow(2400.0, 3)), 1e-18);
  EXPECT_NEAR(x.G, x.L * std::sqrt(1 - 0.09), 1e-12);
}

TEST(ParallaxTables, MirrorAndSupport) {
  const OrbitGeometry g(2400.0, 0.3, 1.1);
  EXPECT_EQ(q_coeff(0, -1, g), q_coeff(0, 1, g));
  EXPECT_EQ(q_coeff(7, 0, g), 0.0);
  EXPECT_EQ(q_coeff(1, 3, g), 0.0);
  EXPECT_EQ(qtilde_coeff(6, 0, g), 0.0);
  EXPECT_EQ(qtilde_coeff(1, 3, g), 0.0);
}

TEST(ParallaxTables, SecondDegreeExpansionMatchesKaula) {
  const GravityField& f = *test::moon();
  const OrbitGeometry g(2400.0, 0.4, 0.8);
  for (double anomaly : {0.0, 1.0, 2.5, -1.2})
    EXPECT_NEAR(v2_explicit(f, g, 0.7, anomaly), osculating_vi(f, 2, g, 0.7, anomaly), 1e-18);
}

TEST(ParallaxFactor, Definition) {
  const OrbitGeometry g(2000.0, 0.5, 1.0);
  const double r = g.radius(0.8);
  EXPECT_NEAR(parallax_factor(g, 0.8), 2000.0 * 2000.0 * g.eta() / (r * r), 1e-13);
}

TEST(MeanHamiltonian, KeplerTermPlusPerturbation) {
  const MeanModelSpec spec = MeanModelSpec::defaults(test::moon(), 12);
  const MeanHamiltonian h(spec);
  const OrbitGeometry g(2338.0, 0.08, 1.1);
  EXPECT_NEAR(h.evaluate(g, -1.2), -test::moon()->mu() / (2 * 2338.0) + h.perturbation(g, -1.2), 1e-15);
  EXPECT_EQ(h(2338.0, 0.08, 1.1, -1.2), h.evaluate(g, -1.2));
  EXPECT_EQ(mean_hamiltonian(spec, 2338.0, 0.08, 1.1, -1.2), h.evaluate(g, -1.2));
  EXPECT_EQ(h.second_order(g, -1.2), 0.0);
  EXPECT_EQ(h.series().size(), mean_series_term_count(12));
}

TEST(MeanHamiltonian, FirstOrderIsMinusMuOverATimesSeries) {
  const MeanHamiltonian h(MeanModelSpec::defaults(test::moon(), 20));
  const OrbitGeometry g(2338.0, 0.2, 0.9);
  EXPECT_NEAR(h.perturbation(g, 0.4), -test::moon()->mu() / 2338.0 * h.series().evaluate(g, 0.4), 1e-18);
}

TEST(MeanHamiltonian, DisabledDegreesDropOut) {
  MeanModelSpec spec = MeanModelSpec::defaults(test::moon(), 5);
  spec.disabled_degrees = {3, 5};
  const MeanHamiltonian h(spec);
  const GravityField& f = *test::moon();
  const OrbitGeometry g(2338.0, 0.2, 0.9);
  const double expected = -f.mu() / 2338.0 * (averaged_vi(f, 2, g, 0.4) + averaged_vi(f, 4, g, 0.4));
  EXPECT_NEAR(h.perturbation(g, 0.4), expected, 1e-15 * std::abs(expected));
}

TEST(MeanHamiltonian, PartialsMatchFiniteDifferencesWithSecondOrder) {
  auto field = std::make_shared<const GravityField>(earth_like());
  MeanModelSpec spec = MeanModelSpec::defaults(field);
  ASSERT_TRUE(spec.include_j2sq);
  spec.include_centering = true;
  const MeanHamiltonian h(spec);
  const double a = 7200.0, e = 0.05, inc = 1.2, w = 0.7, step = 1e-5;
  const OrbitGeometry g(a, e, inc);
  const SeriesPartials p = h.perturbation_partials(g, w);
  auto at = [&](double ee, double ss, double ww) {
    return h.perturbation(OrbitGeometry::from_sin_cos(a, ee, ss, std::sqrt(1 - ss * ss)), ww);
  };
  const double s = g.s(), scale = std::abs(p.value);
  EXPECT_NEAR(p.value, h.perturbation(g, w), 1e-15 * scale);
  EXPECT_NEAR(p.d_e, (at(e + step, s, w) - at(e - step, s, w)) / (2 * step), 1e-6 * scale);
  EXPECT_NEAR(p.d_s, (at(e, s + step, w) - at(e, s - step, w)) / (2 * step), 1e-6 * scale);
  EXPECT_NEAR(p.d_omega, (at(e, s, w + step) - at(e, s, w - step)) / (2 * step), 1e-6 * scale);
  EXPECT_NE(h.second_order(g, w), 0.0);
}

TEST(MeanHamiltonian, SharedSeriesConstructor) {
  const MeanModelSpec spec = MeanModelSpec::defaults(test::moon(), 9);
  auto series = std::make_shared<const AveragedSeries>(build_mean_series(*test::moon(), 9));
  const MeanHamiltonian shared(spec, series), own(spec);
  const OrbitGeometry g(2100.0, 0.1, 1.4);
  EXPECT_EQ(shared.evaluate(g, 0.2), own.evaluate(g, 0.2));
  EXPECT_EQ(shared.shared_series(), series);
}

}  // namespace
}  // namespace zonal
