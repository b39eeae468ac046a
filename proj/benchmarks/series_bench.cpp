#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>

#include "zonal/dynamics.hpp"
#include "zonal/gravity_field.hpp"
#include "zonal/kaula.hpp"
#include "zonal/poisson_series.hpp"

namespace {

const zonal::GravityField& moon() {
  static const zonal::GravityField field = zonal::load_field(zonal::default_field_path());
  return field;
}

void BM_KaulaDegree(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    zonal::AveragedSeries s;
    s.append_degree(moon(), d);
    benchmark::DoNotOptimize(s.size());
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_KaulaDegree)->DenseRange(10, 50, 10)->Complexity();

void BM_BruteForceDegree(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto avg = zonal::brute_force_average(zonal::expand_vi(moon(), d));
    benchmark::DoNotOptimize(avg.size());
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_BruteForceDegree)->DenseRange(10, 30, 10)->Unit(benchmark::kMillisecond)->Complexity();

void BM_InclinationTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    zonal::InclinationTable F(n, 0.8944, true);
    benchmark::DoNotOptimize(F(n, n / 2));
  }
}
BENCHMARK(BM_InclinationTable)->Arg(12)->Arg(50);

void BM_MeanSeriesEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const zonal::AveragedSeries s = zonal::build_mean_series(moon(), n);
  const zonal::OrbitGeometry g(2337.0, 0.08, 1.1);
  double w = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.evaluate(g, w));
    w += 1e-3;
  }
}
BENCHMARK(BM_MeanSeriesEvaluate)->Arg(12)->Arg(50);

void BM_MeanSeriesPartials(benchmark::State& state) {
  const zonal::AveragedSeries s = zonal::build_mean_series(moon(), 50);
  const zonal::OrbitGeometry g(2337.0, 0.08, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(s.evaluate_partials(g, -1.5).d_e);
}
BENCHMARK(BM_MeanSeriesPartials);

void BM_PhaseMap(benchmark::State& state) {
  zonal::PhaseMapSpec spec;
  spec.a = moon().reference_radius() + 600.0;
  spec.inclination_circular = 63.45 * std::numbers::pi / 180.0;
  spec.model = zonal::MeanModelSpec::defaults(std::make_shared<const zonal::GravityField>(moon()), 50);
  spec.resolution = static_cast<int>(state.range(0));
  spec.threads = 1;
  const zonal::ReducedHamiltonian k(spec);
  for (auto _ : state) benchmark::DoNotOptimize(zonal::phase_map(spec, k).k_scale());
}
BENCHMARK(BM_PhaseMap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
