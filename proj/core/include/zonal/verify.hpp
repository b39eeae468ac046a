#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonal/gravity_field.hpp"

namespace zonal {

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0;     ///< worst observed error under the check's metric
  double tolerance = 0;
  double seconds = 0;
  std::string detail;
};

struct VerifyReport {
  std::string field_name;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  int n_max = 30;                          ///< cap for the expansion and provenance checks
  std::vector<int> potential_degrees{5, 10, 30};
  int averaging_degree = 50;
  int states = 200;
  int bracket_states = 50;
  std::uint64_t seed = 20240917;
};

/**
 * Independent-oracle suite: composition vs direct potential, averaging vs quadrature,
 * Kaula series vs expanded Poisson average, second-order terms vs numeric brackets,
 * and the supporting identities. Degrees above the field's n_max are capped.
 * Each check catches its own exceptions and reports them as a failure.
 */
VerifyReport run_verification(const GravityField& field, const VerifyOptions& options = {});

void to_json(nlohmann::json& j, const CheckResult& c);
void to_json(nlohmann::json& j, const VerifyReport& r);

/// One line per check: PASS/FAIL, name, metric, tolerance, time.
std::string format_report(const VerifyReport& report);

}  // namespace zonal
