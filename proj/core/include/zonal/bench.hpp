#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "zonal/gravity_field.hpp"

namespace zonal {

enum class BenchMethod { kaula, brute_force };

std::string to_string(BenchMethod m);
BenchMethod parse_bench_method(const std::string& text);

struct BenchRecord {
  int degree = 0;
  BenchMethod method = BenchMethod::kaula;
  double construction_s = 0;  ///< median time to build the terms of this degree alone
  double evaluation_s = 0;    ///< median time per evaluated point
  std::size_t term_count = 0;
  int repetitions = 0;
  long inner_iterations = 0;  ///< calls per timed sample
  std::string environment;
};

struct BenchOptions {
  int repetitions = 5;
  double min_sample_s = 2e-3;  ///< inner count doubles until a sample lasts this long
  /// Throughput mode: distributes points over threads; never used for scaling claims.
  bool parallel = false;
};

/// Compiler, build type and hardware thread count.
std::string environment_fingerprint();

/// Per-degree construction cost. Degrees must be ascending within 2..field n_max.
std::vector<BenchRecord> bench_construction(const GravityField& field, const std::vector<int>& degrees,
                                            const std::vector<BenchMethod>& methods, const BenchOptions& options = {});

/// Evaluation cost of the full mean series up to degree at n_points random states;
/// first = kaula, second = brute_force. n_points = 0 yields zero-cost records.
std::pair<BenchRecord, BenchRecord> bench_evaluation(const GravityField& field, int degree, int n_points,
                                                     const BenchOptions& options = {});

/// Least-squares slope of log(construction_s) against log(degree) over [lo, hi].
double loglog_slope(const std::vector<BenchRecord>& records, BenchMethod method, int lo, int hi);

}  // namespace zonal
