#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zonal/kaula.hpp"
#include "zonal/poisson_series.hpp"

namespace zonal {
namespace {

PoissonPoint point(double f, double omega) {
  PoissonPoint x;
  x.e = 0.3;
  x.s = 0.6;
  x.c = 0.8;
  x.eta = std::sqrt(1 - 0.09);
  x.ratio = 0.7;
  x.f = f;
  x.omega = omega;
  return x;
}

TEST(PoissonSeries, CanonicalAngles) {
  const PoissonSeries c = PoissonSeries::trig(-2, 1, Trig::cos);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.terms()[0].k_f, 2);
  EXPECT_EQ(c.terms()[0].k_omega, -1);
  const PoissonSeries s = PoissonSeries::trig(-2, 0, Trig::sin);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(static_cast<double>(s.terms()[0].coefficient), -1.0);
  EXPECT_TRUE(PoissonSeries::trig(0, 0, Trig::sin).empty());
  const PoissonSeries x = PoissonSeries::trig(-3, -2, Trig::sin);
  EXPECT_NEAR(x.evaluate(point(0.4, 0.9)), std::sin(-3 * 0.4 - 2 * 0.9), 1e-15);
}

TEST(PoissonSeries, AdditionMergesAndPurges) {
  const PoissonSeries a = PoissonSeries::trig(1, 0, Trig::cos, 2);
  const PoissonSeries b = PoissonSeries::trig(1, 0, Trig::cos, -2);
  EXPECT_TRUE((a + b).empty());
  EXPECT_EQ((a + a).size(), 1u);
  EXPECT_EQ(static_cast<double>((a + a).terms()[0].coefficient), 4.0);
}

TEST(PoissonSeries, ProductToSum) {
  const PoissonSeries c = PoissonSeries::trig(1, 0, Trig::cos);
  const PoissonSeries sq = c * c;
  EXPECT_EQ(sq.size(), 2u);
  for (double f : {0.1, 1.7, -2.5}) EXPECT_NEAR(sq.evaluate(point(f, 0)), std::cos(f) * std::cos(f), 4e-16);
  const PoissonSeries sw = PoissonSeries::trig(1, 1, Trig::sin) * PoissonSeries::trig(2, -1, Trig::cos);
  EXPECT_NEAR(sw.evaluate(point(0.3, 1.1)), std::sin(0.3 + 1.1) * std::cos(0.6 - 1.1), 4e-16);
}

TEST(PoissonSeries, MonomialsMultiplyExponents) {
  Exponents ex;
  ex[Symbol::e] = 2;
  ex[Symbol::ratio] = 1;
  const PoissonSeries m = PoissonSeries::monomial(3, ex);
  const PoissonSeries p = m * m;
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.terms()[0].exponents[Symbol::e], 4);
  EXPECT_EQ(p.terms()[0].exponents[Symbol::ratio], 2);
  EXPECT_NEAR(p.evaluate(point(0, 0)), 9 * std::pow(0.3, 4) * 0.49, 1e-16);
}

TEST(PoissonSeries, AverageKeepsFreeTerms) {
  const PoissonSeries s = PoissonSeries::constant(2) + PoissonSeries::trig(1, 0, Trig::cos) +
                          PoissonSeries::trig(0, 2, Trig::cos, 5);
  const PoissonSeries avg = brute_force_average(s);
  EXPECT_EQ(avg.size(), 2u);
  for (const PoissonTerm& t : avg.terms()) EXPECT_EQ(t.k_f, 0);
}

TEST(ExpandVi, MatchesClosedForm) {
  const GravityField& f = *test::moon();
  const double R = f.reference_radius();
  for (int i : {2, 3, 6, 11}) {
    const PoissonSeries v = expand_vi(f, i);
    EXPECT_EQ(v.min_degree(), i);
    for (double e : {0.0, 0.4, 0.8}) {
      const OrbitGeometry g(2600.0, e, 1.1);
      for (double anomaly : {0.3, 2.4}) {
        const double direct = osculating_vi(f, i, g, -0.6, anomaly);
        EXPECT_NEAR(v.evaluate(PoissonPoint::at(g, R, -0.6, anomaly)), direct, 1e-13 * std::abs(direct) + 1e-22) << i;
      }
    }
  }
}

TEST(BruteForce, AverageEqualsKaulaDegreeByDegree) {
  const GravityField& f = *test::moon();
  const double R = f.reference_radius();
  const OrbitGeometry g(2100.0, 0.35, 0.7);
  for (int i = 2; i <= 12; ++i) {
    const double kaula = averaged_vi(f, i, g, 1.3);
    const double brute = brute_force_average(expand_vi(f, i)).evaluate(PoissonPoint::at(g, R, 1.3, 0.0));
    EXPECT_NEAR(brute, kaula, 1e-13 * std::abs(kaula) + 1e-22) << i;
  }
  const PoissonSeries total = brute_force_mean_series(f, 8);
  const AveragedSeries kaula = build_mean_series(f, 8);
  EXPECT_GT(total.size(), kaula.size());
  EXPECT_NEAR(total.evaluate(PoissonPoint::at(g, R, 1.3, 0.0)), kaula.evaluate(g, 1.3), 1e-13 * std::abs(kaula.evaluate(g, 1.3)));
}

TEST(BruteForce, TermCountsExceedKaulaFromDegreeFour) {
  const GravityField& f = *test::moon();
  for (int i = 4; i <= 10; ++i) {
    const std::size_t brute = brute_force_average(expand_vi(f, i)).size();
    EXPECT_GT(brute, static_cast<std::size_t>((i - 2) / 2 + 1)) << i;
  }
}

TEST(PoissonSeries, DumpListsOneTermPerLine) {
  const PoissonSeries s = PoissonSeries::constant(1) + PoissonSeries::trig(2, 1, Trig::sin, 3);
  const std::string text = s.dump();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("sin"), std::string::npos);
}

}  // namespace
}  // namespace zonal
