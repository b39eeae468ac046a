#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "app.hpp"
#include "support.hpp"
#include "zonal/gravity_field.hpp"

namespace zonal {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"frozen", "--sma", "2000", "--alt", "300", "--inc", "60"}).code, 2);
  EXPECT_EQ(run({"frozen", "--alt", "300"}).code, 2);
  EXPECT_EQ(run({"frozen", "--alt", "300", "--inc", "60", "--nmax", "80"}).code, 2);
  EXPECT_EQ(run({"phasemap", "--alt", "-300", "--inc", "60"}).code, 2);
}

TEST(Cli, CorruptedFieldReportsLine) {
  const auto dir = test::scratch_dir("cli");
  const auto bad = test::write_file(dir, "bad.gfc", "begin_of_head\nearth_gravity_constant 1e12\nradius 1e6\nend_of_head\ngfc 2 0 x 0\n");
  const Result r = run({"field", "--field", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;
  EXPECT_EQ(run({"verify", "--field", (dir / "missing.gfc").string()}).code, 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyKeplerFieldSucceeds) {
  const auto dir = test::scratch_dir("cli");
  std::ostringstream text;
  write_field(text, GravityField::kepler(4902.8, 1738.0, 20), FieldFormat::icgem);
  const auto path = test::write_file(dir, "kepler.gfc", text.str());
  const Result r = run({"verify", "--field", path.string(), "--emit", "json"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["passed"], true);
  std::filesystem::remove_all(dir);
}

TEST(Cli, FieldFromEnvironment) {
  const auto dir = test::scratch_dir("cli");
  std::ostringstream text;
  write_field(text, GravityField("env-field", 1.0, 1.0, {1.0, 0.0, -1e-3}), FieldFormat::csv);
  const auto path = test::write_file(dir, "env.csv", text.str());
  ::setenv("ZONAL_FIELD", path.c_str(), 1);
  const Result r = run({"field", "--emit", "json"});
  ::unsetenv("ZONAL_FIELD");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["n_max"], 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, FrozenTableSortedWithImpactFlags) {
  const Result r = run({"frozen", "--alt", "600", "--inc", "63.45", "--nmax", "12", "--emit", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = nlohmann::json::parse(r.out);
  ASSERT_GE(rows.size(), 1u);
  EXPECT_NEAR(rows[0]["e"].get<double>(), 0.09, 0.01);
  EXPECT_EQ(rows[0]["impact"], false);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1]["e"].get<double>(), rows[i]["e"].get<double>());
  const Result none = run({"frozen", "--alt", "600", "--inc", "63.45", "--nmax", "7"});
  EXPECT_EQ(none.code, 0);
  EXPECT_NE(none.out.find("0 non-impact"), std::string::npos) << none.out;
}

TEST(Cli, PhasemapOutputsAreByteIdenticalAndReingestible) {
  const auto dir = test::scratch_dir("cli");
  const std::vector<std::string> base{"phasemap", "--alt", "600", "--inc", "63.45", "--nmax", "3", "--grid", "32"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  const Result j1 = run(with({"--emit", "json"})), j2 = run(with({"--emit", "json"}));
  ASSERT_EQ(j1.code, 0) << j1.err;
  EXPECT_EQ(j1.out, j2.out);
  EXPECT_EQ(nlohmann::json::parse(j1.out)["frozen"].size(), 5u);

  const auto json_path = dir / "map.json";
  ASSERT_EQ(run(with({"--emit", "json", "--out", json_path.string()})).code, 0);
  const Result svg = run(with({"--emit", "svg"}));
  const Result again = run({"phasemap", "--from", json_path.string(), "--emit", "svg"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(svg.out, again.out);
  EXPECT_EQ(run({"phasemap", "--from", (dir / "nope.json").string()}).code, 2);

  const Result csv = run(with({"--emit", "csv"}));
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 32 * 32 + 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, SeriesDumpListsTerms) {
  const Result r = run({"series", "dump", "--nmax", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["terms"].size(), 25u);
}

TEST(Cli, BenchEmitsCsv) {
  const Result r = run({"bench", "--degrees", "2:4", "--reps", "5", "--methods", "kaula"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_EQ(r.out.rfind("degree,method", 0), 0u);
  EXPECT_EQ(run({"bench", "--degrees", "9:3"}).code, 2);
}

}  // namespace
}  // namespace zonal
