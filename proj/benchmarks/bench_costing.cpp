// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <benchmark/benchmark.h>

#include "sapteve/costing.hpp"

using namespace sapteve;

namespace {

void BM_QromCost(benchmark::State& state) {
  const auto L = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qrom_cost(L, 32));
}
BENCHMARK(BM_QromCost)->RangeMultiplier(64)->Range(64, 1 << 30);

void BM_BudgetErrors(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(budget_errors(65.54, 6.35, 537.3, 0.0016));
}
BENCHMARK(BM_BudgetErrors);

void BM_EstimateObservable(benchmark::State& state) {
  SystemParams p;
  p.lambda_A = 232.2;
  p.lambda_B = 361.8;
  p.gap_A = 0.0069;
  p.gap_B = 0.1212;
  p.n_orb_A = static_cast<int>(state.range(0));
  p.n_orb_B = static_cast<int>(state.range(0));
  const ObservableShape shape = default_observable_shape(Observable::kVP, p.n_orb_A, p.n_orb_B);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_observable(Observable::kVP, 537.3, 5.66e-4, p, shape, {}));
}
BENCHMARK(BM_EstimateObservable)->RangeMultiplier(4)->Range(8, 512)->Unit(benchmark::kMicrosecond);

void BM_CalibrateQspPrefactor(benchmark::State& state) {
  SystemParams p;
  p.lambda_A = 232.2;
  p.lambda_B = 361.8;
  p.gap_A = 0.0069;
  p.gap_B = 0.1212;
  p.n_orb_A = 43;
  p.n_orb_B = 40;
  const ObservableShape shape = default_observable_shape(Observable::kV, 43, 40);
  for (auto _ : state)
    benchmark::DoNotOptimize(calibrate_qsp_prefactor(Observable::kV, 65.54, 7.29e-5, p, shape, {}, 9.74e19));
}
BENCHMARK(BM_CalibrateQspPrefactor)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
