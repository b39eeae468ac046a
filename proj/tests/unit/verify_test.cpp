#include <gtest/gtest.h>

#include "support.hpp"
#include "zonal/verify.hpp"

namespace zonal {
namespace {

TEST(Verify, KeplerFieldPassesTrivially) {
  const VerifyReport r = run_verification(GravityField::kepler(4902.8, 1738.0, 50));
  EXPECT_TRUE(r.passed()) << format_report(r);
  EXPECT_GE(r.checks.size(), 14u);
}

TEST(Verify, ReducedSuiteOnLunarField) {
  VerifyOptions o;
  o.n_max = 12;
  o.potential_degrees = {5, 10};
  o.averaging_degree = 20;
  o.states = 20;
  o.bracket_states = 10;
  const VerifyReport r = run_verification(*test::moon(), o);
  EXPECT_TRUE(r.passed()) << format_report(r);
  ASSERT_NE(r.find("dual_provenance"), nullptr);
  EXPECT_LE(r.find("dual_provenance")->metric, 1e-12);
  EXPECT_EQ(r.find("no_such_check"), nullptr);
}

TEST(Verify, ReportSerializes) {
  VerifyReport r;
  r.field_name = "x";
  r.checks.push_back({"a", true, 1e-15, 1e-12, 0.1, "ok"});
  r.checks.push_back({"b", false, 1.0, 1e-12, 0.2, "bad"});
  EXPECT_FALSE(r.passed());
  const nlohmann::json j = r;
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["checks"].size(), 2u);
  const std::string text = format_report(r);
  EXPECT_EQ(text.rfind("PASS a", 0), 0u);
  EXPECT_NE(text.find("FAIL b"), std::string::npos);
}

}  // namespace
}  // namespace zonal
