#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonal/bench.hpp"
#include "zonal/dynamics.hpp"
#include "zonal/gravity_field.hpp"
#include "zonal/kaula.hpp"

namespace zonal {

// JSON numbers use the shortest representation that round-trips, so output is
// deterministic and re-ingestion is exact. Non-finite values become null.

void to_json(nlohmann::json& j, const GravityField& field);
void to_json(nlohmann::json& j, const AveragedSeries& series);
void to_json(nlohmann::json& j, const FrozenOrbit& orbit);
void from_json(const nlohmann::json& j, FrozenOrbit& orbit);
void to_json(nlohmann::json& j, const PhaseMap& map);
void from_json(const nlohmann::json& j, PhaseMap& map);
void to_json(nlohmann::json& j, const BenchRecord& record);
void from_json(const nlohmann::json& j, BenchRecord& record);

/// Model flags without the field itself.
nlohmann::json model_json(const MeanModelSpec& spec);

/// id, name, n_max, mu, reference_radius.
nlohmann::json field_summary(const std::string& id, const GravityField& field);

Stability parse_stability(const std::string& text);

/// %.17g; "nan" for non-finite values.
std::string format_g17(double v);

/// One row per cell: i0,i1,e,omega,x,y,K,masked.
std::string phase_map_csv(const PhaseMap& map);
std::string frozen_csv(const std::vector<FrozenOrbit>& orbits);
std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace zonal
