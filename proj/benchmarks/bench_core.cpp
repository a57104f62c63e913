#include <benchmark/benchmark.h>

#include <numbers>

#include "tailsitter/analysis.hpp"
#include "tailsitter/dynamics.hpp"
#include "tailsitter/harness.hpp"
#include "tailsitter/simulation.hpp"

namespace ts = tailsitter;

namespace {

const ts::AeroSpline& naca() {
  static const ts::AeroSpline spline = ts::load_airfoil(TAILSITTER_SOURCE_DATA_DIR "/naca0015_re160k.csv");
  return spline;
}

void BM_SplineEval(benchmark::State& state) {
  const auto& spline = naca();
  double alpha = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spline.at(alpha));
    alpha += 1e-3;
    if (alpha > 3.0) alpha = -3.0;
  }
}
BENCHMARK(BM_SplineEval);

void BM_EquationsOfMotion(benchmark::State& state) {
  ts::VehicleParams params;
  params.eta = static_cast<double>(state.range(0)) / 10.0;
  ts::State s{0, 0, 0.3, 18.0, 0.5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(ts::equations_of_motion(s, {2.0, 2.5}, params, naca()));
}
BENCHMARK(BM_EquationsOfMotion)->Arg(0)->Arg(10);

void BM_Rk4Step(benchmark::State& state) {
  ts::VehicleParams params;
  ts::State s{0, 0, 0.3, 18.0, 0.5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(ts::rk4_step(s, {2.0, 2.5}, 0.01, params, naca()));
}
BENCHMARK(BM_Rk4Step);

void BM_FindEquilibria(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ts::find_equilibria(2.5, naca()));
}
BENCHMARK(BM_FindEquilibria)->Unit(benchmark::kMicrosecond);

void BM_BifurcationScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ts::bifurcation_scan(0.0, 8.0, 0.01, naca()));
}
BENCHMARK(BM_BifurcationScan)->Unit(benchmark::kMillisecond);

void BM_TrimSolve(benchmark::State& state) {
  ts::VehicleParams params;
  const double v = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ts::trim_solve(v, 0.0, 0.5, params, naca()));
}
BENCHMARK(BM_TrimSolve)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_HoverStepScenario(benchmark::State& state) {
  const auto config = ts::default_config("hover-step");
  for (auto _ : state) benchmark::DoNotOptimize(ts::run_scenario(config, naca()));
}
BENCHMARK(BM_HoverStepScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
