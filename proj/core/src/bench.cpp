#include "zonal/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include "zonal/errors.hpp"
#include "zonal/kaula.hpp"
#include "zonal/poisson_series.hpp"

namespace zonal {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Timing {
  double median = 0;
  long inner = 1;
};

/// Median over repetitions of the per-call time; one warm-up sample is discarded.
Timing time_median(const std::function<void()>& body, const BenchOptions& options) {
  long inner = 1;
  for (;;) {
    const auto t0 = clock_type::now();
    for (long k = 0; k < inner; ++k) body();
    if (seconds_since(t0) >= options.min_sample_s || inner >= (1L << 30)) break;
    inner *= 2;
  }
  std::vector<double> samples;
  for (int r = 0; r < std::max(options.repetitions, 1); ++r) {
    const auto t0 = clock_type::now();
    for (long k = 0; k < inner; ++k) body();
    samples.push_back(seconds_since(t0) / static_cast<double>(inner));
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const double median = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  return {median, inner};
}

template <typename T>
void keep(const T& value) {
  asm volatile("" : : "g"(&value) : "memory");
}

}  // namespace

std::string to_string(BenchMethod m) { return m == BenchMethod::kaula ? "kaula" : "brute_force"; }

BenchMethod parse_bench_method(const std::string& text) {
  if (text == "kaula") return BenchMethod::kaula;
  if (text == "brute_force" || text == "brute-force") return BenchMethod::brute_force;
  throw DomainError("unknown bench method '" + text + "'");
}

std::string environment_fingerprint() {
  std::string s;
#if defined(__clang__)
  s += "clang-" + std::to_string(__clang_major__) + "." + std::to_string(__clang_minor__);
#elif defined(__GNUC__)
  s += "gcc-" + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#else
  s += "unknown-compiler";
#endif
#ifdef NDEBUG
  s += " release";
#else
  s += " debug";
#endif
  s += " threads=" + std::to_string(std::thread::hardware_concurrency());
  return s;
}

std::vector<BenchRecord> bench_construction(const GravityField& field, const std::vector<int>& degrees,
                                            const std::vector<BenchMethod>& methods, const BenchOptions& options) {
  if (!std::is_sorted(degrees.begin(), degrees.end())) throw DomainError("bench degrees must be ascending");
  for (int d : degrees)
    if (d < 2 || d > field.n_max()) throw DomainError("bench degree " + std::to_string(d) + " outside field range");
  const std::string env = environment_fingerprint();
  std::vector<BenchRecord> out;
  for (int d : degrees) {
    for (BenchMethod m : methods) {
      BenchRecord rec;
      rec.degree = d;
      rec.method = m;
      rec.repetitions = std::max(options.repetitions, 1);
      rec.environment = env;
      Timing t;
      if (m == BenchMethod::kaula) {
        t = time_median(
            [&] {
              AveragedSeries s;
              s.append_degree(field, d);
              keep(s);
            },
            options);
        AveragedSeries s;
        s.append_degree(field, d);
        rec.term_count = s.size();
      } else {
        t = time_median(
            [&] {
              const PoissonSeries avg = brute_force_average(expand_vi(field, d));
              keep(avg);
            },
            options);
        rec.term_count = brute_force_average(expand_vi(field, d)).size();
      }
      rec.construction_s = t.median;
      rec.inner_iterations = t.inner;
      out.push_back(rec);
    }
  }
  return out;
}

std::pair<BenchRecord, BenchRecord> bench_evaluation(const GravityField& field, int degree, int n_points,
                                                     const BenchOptions& options) {
  if (degree < 2 || degree > field.n_max()) throw DomainError("bench degree outside field range");
  if (n_points < 0) throw DomainError("n_points must be non-negative");
  const std::string env = environment_fingerprint();
  BenchRecord kaula, brute;
  kaula.degree = brute.degree = degree;
  kaula.method = BenchMethod::kaula;
  brute.method = BenchMethod::brute_force;
  kaula.environment = brute.environment = env;
  kaula.repetitions = brute.repetitions = std::max(options.repetitions, 1);

  const AveragedSeries series = build_mean_series(field, degree);
  const PoissonSeries expanded = brute_force_mean_series(field, degree);
  kaula.term_count = series.size();
  brute.term_count = expanded.size();
  if (n_points == 0) return {kaula, brute};

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double radius = field.reference_radius();
  std::vector<OrbitGeometry> states;
  std::vector<double> omegas;
  for (int k = 0; k < n_points; ++k) {
    const double e = 0.6 * u(rng);
    states.emplace_back(radius * (1.05 + u(rng)) / (1.0 - e), e, std::numbers::pi * u(rng));
    omegas.push_back(2.0 * std::numbers::pi * u(rng));
  }
  std::vector<PoissonPoint> points;
  for (int k = 0; k < n_points; ++k) points.push_back(PoissonPoint::at(states[static_cast<std::size_t>(k)], radius,
                                                                       omegas[static_cast<std::size_t>(k)], 0.0));

  auto run = [&](auto&& eval) {
    const unsigned threads = options.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
    if (threads == 1) {
      double acc = 0;
      for (int k = 0; k < n_points; ++k) acc += eval(k);
      keep(acc);
      return;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        double acc = 0;
        for (int k = static_cast<int>(t); k < n_points; k += static_cast<int>(threads)) acc += eval(k);
        keep(acc);
      });
  };
  const Timing tk = time_median(
      [&] { run([&](int k) { return series.evaluate(states[static_cast<std::size_t>(k)], omegas[static_cast<std::size_t>(k)]); }); },
      options);
  const Timing tb = time_median([&] { run([&](int k) { return expanded.evaluate(points[static_cast<std::size_t>(k)]); }); },
                                options);
  kaula.evaluation_s = tk.median / n_points;
  brute.evaluation_s = tb.median / n_points;
  kaula.inner_iterations = tk.inner;
  brute.inner_iterations = tb.inner;
  return {kaula, brute};
}

double loglog_slope(const std::vector<BenchRecord>& records, BenchMethod method, int lo, int hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const BenchRecord& r : records) {
    if (r.method != method || r.degree < lo || r.degree > hi || !(r.construction_s > 0)) continue;
    const double x = std::log(static_cast<double>(r.degree)), y = std::log(r.construction_s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("slope fit needs at least two degrees");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace zonal
