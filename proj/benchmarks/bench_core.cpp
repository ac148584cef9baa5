#include "lurelab/apsignals.hpp"
#include "lurelab/certcore.hpp"
#include "lurelab/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace lurelab;

static void BM_SimulateTwoMass(benchmark::State& state) {
  const auto p = preset_two_mass();
  const auto& v = p.forcing("v_s");
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto tr = simulate(p.system, p.initial_conditions[0], v, T, 1e-3);
    benchmark::DoNotOptimize(tr.states.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(T / 1e-3));
}
BENCHMARK(BM_SimulateTwoMass)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_LmiSearchOneMass(benchmark::State& state) {
  const auto p = preset_one_mass();
  for (auto _ : state) {
    auto r = lmi_search(p.system.triple(), Strictness::SemiDefinite);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_LmiSearchOneMass)->Unit(benchmark::kMillisecond);

static void BM_LmiVerifyWec(benchmark::State& state) {
  const auto p = preset_wec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lmi_verify(p.system.triple(), p.P, 1e-10));
}
BENCHMARK(BM_LmiVerifyWec)->Arg(2)->Arg(8);

static void BM_StepanovScan(benchmark::State& state) {
  const auto v = make_example_forcings(1).at("v_p");
  PeriodScanOptions o;
  o.epsilon = 1e-6;
  o.tau_hi = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stepanov_period_scan(v, o));
}
BENCHMARK(BM_StepanovScan)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_FourierCoefficient(benchmark::State& state) {
  const auto v = make_example_forcings(1).at("v_ap");
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coefficient(v, 2.0 * M_PI, 500.0));
}
BENCHMARK(BM_FourierCoefficient)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
