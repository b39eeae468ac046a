#include "zonal/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "zonal/errors.hpp"

namespace zonal {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

}  // namespace

std::string format_g17(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Stability parse_stability(const std::string& text) {
  if (text == "center") return Stability::center;
  if (text == "saddle") return Stability::saddle;
  if (text == "degenerate") return Stability::degenerate;
  throw DomainError("unknown stability '" + text + "'");
}

void to_json(json& j, const GravityField& field) {
  j = json{{"name", field.name()},
           {"mu", field.mu()},
           {"reference_radius", field.reference_radius()},
           {"rotation_rate", field.rotation_rate()},
           {"n_max", field.n_max()},
           {"source_normalized", field.source_normalized()},
           {"zonals", field.zonals()},
           {"tesseral_count", field.tesserals().size()}};
}

json field_summary(const std::string& id, const GravityField& field) {
  return json{{"id", id},
              {"name", field.name()},
              {"n_max", field.n_max()},
              {"mu", field.mu()},
              {"reference_radius", field.reference_radius()}};
}

void to_json(json& j, const AveragedSeries& series) {
  json terms = json::array();
  for (const AveragedTerm& t : series.terms()) {
    json ecc = json::array();
    for (std::size_t m = t.ecc_begin; m < t.ecc_end; ++m)
      ecc.push_back({series.eccentricity_monomials()[m].power, series.eccentricity_monomials()[m].coefficient});
    terms.push_back({{"degree", t.degree},
                     {"j", t.j},
                     {"kaula_index", t.kaula_index},
                     {"multiplier", t.multiplier},
                     {"phase", t.phase},
                     {"weight", t.weight},
                     {"eccentricity", std::move(ecc)}});
  }
  j = json{{"provenance", "kaula"},
           {"n_max", series.n_max()},
           {"reference_radius", series.reference_radius()},
           {"size", series.size()},
           {"terms", std::move(terms)}};
}

json model_json(const MeanModelSpec& spec) {
  return json{{"n_max", spec.n_max},
              {"include_j2sq", spec.include_j2sq},
              {"include_centering", spec.include_centering},
              {"disabled_degrees", spec.disabled_degrees}};
}

void to_json(json& j, const FrozenOrbit& o) {
  j = json{{"e", o.e},
           {"omega", o.omega},
           {"stability", to_string(o.stability)},
           {"hessian_det", number_or_null(o.hessian_det)},
           {"hessian_trace", number_or_null(o.hessian_trace)},
           {"value", number_or_null(o.value)},
           {"gradient_norm", number_or_null(o.gradient_norm)},
           {"omega_derivative", number_or_null(o.omega_derivative)},
           {"impact", o.impact},
           {"n_max", o.n_max}};
}

void from_json(const json& j, FrozenOrbit& o) {
  o.e = j.at("e").get<double>();
  o.omega = j.at("omega").get<double>();
  o.stability = parse_stability(j.at("stability").get<std::string>());
  o.hessian_det = number_from(j.at("hessian_det"));
  o.hessian_trace = number_from(j.at("hessian_trace"));
  o.value = number_from(j.at("value"));
  o.gradient_norm = number_from(j.at("gradient_norm"));
  o.omega_derivative = number_from(j.value("omega_derivative", json(0.0)));
  o.impact = j.at("impact").get<bool>();
  o.n_max = j.at("n_max").get<int>();
}

void to_json(json& j, const PhaseMap& m) {
  json values = json::array();
  for (double v : m.values) values.push_back(number_or_null(v));
  auto extremum = [](const Extremum& x) { return json{{"value", x.value}, {"e", x.e}, {"omega", x.omega}}; };
  j = json{{"chart", to_string(m.chart)},
           {"resolution", m.resolution},
           {"e_max", m.e_max},
           {"e_impact", m.e_impact},
           {"feasible_limit", m.feasible_limit},
           {"a", m.a},
           {"inclination_circular", m.inclination_circular},
           {"n_max", m.n_max},
           {"disabled_degrees", m.disabled_degrees},
           {"include_j2sq", m.include_j2sq},
           {"include_centering", m.include_centering},
           {"axis0", m.axis0},
           {"axis1", m.axis1},
           {"values", std::move(values)},
           {"mask", m.mask},
           {"minimum", extremum(m.minimum)},
           {"maximum", extremum(m.maximum)},
           {"k_scale", m.k_scale()},
           {"frozen", m.frozen}};
}

void from_json(const json& j, PhaseMap& m) {
  m.chart = parse_grid_chart(j.at("chart").get<std::string>());
  m.resolution = j.at("resolution").get<int>();
  m.e_max = j.at("e_max").get<double>();
  m.e_impact = j.at("e_impact").get<double>();
  m.feasible_limit = j.at("feasible_limit").get<double>();
  m.a = j.at("a").get<double>();
  m.inclination_circular = j.at("inclination_circular").get<double>();
  m.n_max = j.at("n_max").get<int>();
  m.disabled_degrees = j.value("disabled_degrees", std::vector<int>{});
  m.include_j2sq = j.value("include_j2sq", false);
  m.include_centering = j.value("include_centering", false);
  m.axis0 = j.at("axis0").get<std::vector<double>>();
  m.axis1 = j.at("axis1").get<std::vector<double>>();
  m.values.clear();
  for (const json& v : j.at("values")) m.values.push_back(number_from(v));
  m.mask = j.at("mask").get<std::vector<std::uint8_t>>();
  const std::size_t cells = static_cast<std::size_t>(m.resolution) * static_cast<std::size_t>(m.resolution);
  if (m.resolution < 2 || m.axis0.size() != static_cast<std::size_t>(m.resolution) ||
      m.axis1.size() != static_cast<std::size_t>(m.resolution) || m.values.size() != cells || m.mask.size() != cells)
    throw DomainError("phase map JSON has inconsistent grid sizes");
  auto extremum = [](const json& x) {
    return Extremum{x.at("value").get<double>(), x.at("e").get<double>(), x.at("omega").get<double>()};
  };
  m.minimum = extremum(j.at("minimum"));
  m.maximum = extremum(j.at("maximum"));
  m.frozen = j.value("frozen", std::vector<FrozenOrbit>{});
}

void to_json(json& j, const BenchRecord& r) {
  j = json{{"degree", r.degree},
           {"method", to_string(r.method)},
           {"construction_s", r.construction_s},
           {"evaluation_s", r.evaluation_s},
           {"term_count", r.term_count},
           {"repetitions", r.repetitions},
           {"inner_iterations", r.inner_iterations},
           {"environment", r.environment}};
}

void from_json(const json& j, BenchRecord& r) {
  r.degree = j.at("degree").get<int>();
  r.method = parse_bench_method(j.at("method").get<std::string>());
  r.construction_s = j.at("construction_s").get<double>();
  r.evaluation_s = j.at("evaluation_s").get<double>();
  r.term_count = j.at("term_count").get<std::size_t>();
  r.repetitions = j.at("repetitions").get<int>();
  r.inner_iterations = j.at("inner_iterations").get<long>();
  r.environment = j.at("environment").get<std::string>();
}

std::string phase_map_csv(const PhaseMap& m) {
  std::ostringstream out;
  out << "i0,i1,e,omega,x,y,K,masked\n";
  for (int i1 = 0; i1 < m.resolution; ++i1)
    for (int i0 = 0; i0 < m.resolution; ++i0) {
      const auto ev = m.eccentricity_vector(i0, i1);
      out << i0 << ',' << i1 << ',' << format_g17(ev[0]) << ',' << format_g17(ev[1]) << ','
          << format_g17(ev[0] * std::cos(ev[1])) << ',' << format_g17(ev[0] * std::sin(ev[1])) << ','
          << format_g17(m.value(i0, i1)) << ',' << (m.masked(i0, i1) ? 1 : 0) << '\n';
    }
  return out.str();
}

std::string frozen_csv(const std::vector<FrozenOrbit>& orbits) {
  std::ostringstream out;
  out << "e,omega_deg,stability,impact,hessian_det,hessian_trace,gradient_norm,value,n_max\n";
  for (const FrozenOrbit& o : orbits)
    out << format_g17(o.e) << ',' << format_g17(o.omega * 180.0 / std::numbers::pi) << ',' << to_string(o.stability)
        << ',' << (o.impact ? 1 : 0) << ',' << format_g17(o.hessian_det) << ',' << format_g17(o.hessian_trace) << ','
        << format_g17(o.gradient_norm) << ',' << format_g17(o.value) << ',' << o.n_max << '\n';
  return out.str();
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "degree,method,construction_s,evaluation_s,term_count,repetitions,inner_iterations,environment\n";
  for (const BenchRecord& r : records)
    out << r.degree << ',' << to_string(r.method) << ',' << format_g17(r.construction_s) << ','
        << format_g17(r.evaluation_s) << ',' << r.term_count << ',' << r.repetitions << ',' << r.inner_iterations << ','
        << '"' << r.environment << '"' << '\n';
  return out.str();
}

}  // namespace zonal
