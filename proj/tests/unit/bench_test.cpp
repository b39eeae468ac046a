#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "zonal/bench.hpp"
#include "zonal/kaula.hpp"

namespace zonal {
namespace {

TEST(Bench, MethodNames) {
  EXPECT_EQ(to_string(BenchMethod::kaula), "kaula");
  EXPECT_EQ(parse_bench_method("brute_force"), BenchMethod::brute_force);
  EXPECT_ANY_THROW(parse_bench_method("cas"));
}

TEST(Bench, ConstructionRecordsAreFiniteAndCounted) {
  BenchOptions o;
  o.repetitions = 5;
  o.min_sample_s = 1e-4;
  const auto records = bench_construction(*test::moon(), {2, 4, 6}, {BenchMethod::kaula, BenchMethod::brute_force}, o);
  ASSERT_EQ(records.size(), 6u);
  for (const BenchRecord& r : records) {
    EXPECT_GT(r.construction_s, 0.0);
    EXPECT_TRUE(std::isfinite(r.construction_s));
    EXPECT_EQ(r.repetitions, 5);
    EXPECT_GE(r.inner_iterations, 1);
    EXPECT_FALSE(r.environment.empty());
    if (r.method == BenchMethod::kaula) EXPECT_EQ(r.term_count, static_cast<std::size_t>((r.degree - 2) / 2 + 1));
    if (r.method == BenchMethod::brute_force && r.degree >= 4)
      EXPECT_GT(r.term_count, static_cast<std::size_t>((r.degree - 2) / 2 + 1));
  }
}

TEST(Bench, RejectsUnsortedOrOutOfRangeDegrees) {
  EXPECT_ANY_THROW(bench_construction(*test::moon(), {5, 3}, {BenchMethod::kaula}));
  EXPECT_ANY_THROW(bench_construction(*test::moon(), {1}, {BenchMethod::kaula}));
  EXPECT_ANY_THROW(bench_construction(*test::moon(), {51}, {BenchMethod::kaula}));
}

TEST(Bench, ZeroPointEvaluationCostsNothing) {
  const auto [kaula, brute] = bench_evaluation(*test::moon(), 10, 0);
  EXPECT_EQ(kaula.evaluation_s, 0.0);
  EXPECT_EQ(brute.evaluation_s, 0.0);
  EXPECT_EQ(kaula.term_count, mean_series_term_count(10));
  EXPECT_GT(brute.term_count, kaula.term_count);
}

TEST(Bench, EvaluationTimesArePositive) {
  BenchOptions o;
  o.min_sample_s = 1e-4;
  const auto [kaula, brute] = bench_evaluation(*test::moon(), 12, 20, o);
  EXPECT_GT(kaula.evaluation_s, 0.0);
  EXPECT_GT(brute.evaluation_s, 0.0);
}

TEST(Bench, LogLogSlopeOfPowerLaw) {
  std::vector<BenchRecord> records;
  for (int d : {10, 20, 30, 40}) {
    BenchRecord r;
    r.degree = d;
    r.method = BenchMethod::kaula;
    r.construction_s = 3e-7 * std::pow(d, 2.0);
    records.push_back(r);
    r.method = BenchMethod::brute_force;
    r.construction_s = 1e-9 * std::pow(d, 5.0);
    records.push_back(r);
  }
  EXPECT_NEAR(loglog_slope(records, BenchMethod::kaula, 10, 40), 2.0, 1e-12);
  EXPECT_NEAR(loglog_slope(records, BenchMethod::brute_force, 20, 40), 5.0, 1e-12);
}

}  // namespace
}  // namespace zonal
