// Serial vs OpenMP timings for the two parallel kernels.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "aiecon/iafit.hpp"
#include "aiecon/sweep.hpp"

using namespace aiecon;

namespace {

struct FitInputs {
  iafit::Series observed, base, disadvantage, advantage;
  iafit::Grid grid = iafit::Grid::standard();
};

FitInputs fit_inputs(std::size_t len) {
  Rng rng(5);
  iafit::Traces r(6, iafit::Series(len));
  for (auto& s : r) {
    for (auto& x : s) x = rng.uniform01();
  }
  const auto e = iafit::smooth(r, 0.99, 0.5);
  auto reg = iafit::inequity_regressors(e, 0);
  return {r[0], e[0], std::move(reg.disadvantage), std::move(reg.advantage)};
}

void BM_GridSseSerial(benchmark::State& state) {
  const auto in = fit_inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        iafit::kernels::grid_sse_serial(in.observed, in.base, in.disadvantage, in.advantage, in.grid));
  }
}

void BM_GridSseParallel(benchmark::State& state) {
  const auto in = fit_inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        iafit::kernels::grid_sse_parallel(in.observed, in.base, in.disadvantage, in.advantage, in.grid));
  }
}

Manifest sweep_manifest() {
  return parse_manifest(parse_key_values("variants = [communication, teaching]\n"
                                         "systems = [full_libertarian, semi_libertarian_utilitarian, full_utilitarian]\n"
                                         "objectives = [inverse_income, eq_times_prod]\n"
                                         "override.horizon = 500\n"),
                        std::filesystem::current_path());
}

void BM_SweepSerial(benchmark::State& state) {
  const auto m = sweep_manifest();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(m));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto m = sweep_manifest();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_parallel(m, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_GridSseSerial)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridSseParallel)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
