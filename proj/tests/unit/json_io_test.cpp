#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "zonal/json_io.hpp"
#include "zonal/svg_plot.hpp"

namespace zonal {
namespace {

using nlohmann::json;

PhaseMap sample_map(int n_max = 3, int resolution = 24) {
  PhaseMapSpec s;
  s.a = 2338.0;
  s.inclination_circular = 63.45 * test::deg;
  s.model = MeanModelSpec::defaults(test::moon(), n_max);
  s.resolution = resolution;
  const ReducedHamiltonian k(s);
  PhaseMap m = phase_map(s, k);
  m.frozen = find_frozen(k, m.e_max, m.k_scale());
  return m;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Json, PhaseMapRoundTripIsExact) {
  PhaseMap m = sample_map();
  m.values[0] = std::nan("");
  m.mask[0] = 1;
  const json j = m;
  EXPECT_TRUE(j["values"][0].is_null());
  EXPECT_EQ(j["e_impact"].get<double>(), m.e_impact);
  const PhaseMap back = j.get<PhaseMap>();
  EXPECT_EQ(json(back).dump(), j.dump());
  EXPECT_TRUE(std::isnan(back.values[0]));
  EXPECT_EQ(back.frozen.size(), m.frozen.size());
}

TEST(Json, PhaseMapRejectsInconsistentGrid) {
  json j = sample_map();
  j["values"].erase(0);
  EXPECT_ANY_THROW(j.get<PhaseMap>());
}

TEST(Json, FrozenAndBenchRoundTrip) {
  FrozenOrbit o;
  o.e = 0.0851;
  o.omega = -1.5707963267948966;
  o.stability = Stability::saddle;
  o.hessian_det = -2.5e-9;
  o.impact = true;
  o.n_max = 12;
  const FrozenOrbit b = json(o).get<FrozenOrbit>();
  EXPECT_EQ(b.e, o.e);
  EXPECT_EQ(b.omega, o.omega);
  EXPECT_EQ(b.stability, o.stability);
  EXPECT_EQ(b.impact, true);
  EXPECT_EQ(parse_stability("center"), Stability::center);
  EXPECT_ANY_THROW(parse_stability("spiral"));

  BenchRecord r;
  r.degree = 30;
  r.method = BenchMethod::brute_force;
  r.construction_s = 0.094152773999999995;
  r.term_count = 1360;
  r.repetitions = 5;
  r.environment = "x";
  const BenchRecord rb = json(r).get<BenchRecord>();
  EXPECT_EQ(rb.construction_s, r.construction_s);
  EXPECT_EQ(rb.method, r.method);
  EXPECT_EQ(rb.term_count, r.term_count);
}

TEST(Csv, ShapesAndFormatting) {
  const PhaseMap m = sample_map(3, 16);
  const std::string csv = phase_map_csv(m);
  EXPECT_EQ(count(csv, "\n"), 16u * 16u + 1u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i0,i1,e,omega,x,y,K,masked");
  const std::string fz = frozen_csv(m.frozen);
  EXPECT_EQ(count(fz, "\n"), m.frozen.size() + 1);
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_g17(std::nan("")), "nan");
}

TEST(Json, ModelAndFieldSummaries) {
  MeanModelSpec spec = MeanModelSpec::defaults(test::moon(), 7);
  spec.disabled_degrees = {3};
  const json mj = model_json(spec);
  EXPECT_EQ(mj["n_max"], 7);
  EXPECT_EQ(mj["disabled_degrees"], json::array({3}));
  const json fj = field_summary("moon", *test::moon());
  EXPECT_EQ(fj["id"], "moon");
  EXPECT_EQ(fj["n_max"], 50);
  EXPECT_EQ(fj["reference_radius"], 1738.0);
}

TEST(Svg, DeterministicAndReingestible) {
  const PhaseMap m = sample_map();
  const std::string a = render_svg(m), b = render_svg(m);
  EXPECT_EQ(a, b);
  const PhaseMap back = json::parse(json(m).dump()).get<PhaseMap>();
  EXPECT_EQ(render_svg(back), a);
}

TEST(Svg, DrawsImpactCircleAndMarkers) {
  const PhaseMap m = sample_map();
  ASSERT_EQ(m.frozen.size(), 5u);
  const std::string svg = render_svg(m);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "stroke-dasharray=\"6 4\""), 1u);
  EXPECT_EQ(count(svg, "r=\"4\" fill=\"black\""), 3u);
  EXPECT_EQ(count(svg, "stroke-width=\"2\" d=\"M"), 2u);
}

}  // namespace
}  // namespace zonal
