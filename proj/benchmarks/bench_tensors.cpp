// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <benchmark/benchmark.h>

#include "sapteve/factorization.hpp"
#include "sapteve/norms.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;

namespace {

DimerTensors bench_dimer(int n) {
  KernelDimerOptions o;
  o.n_orb_A = n;
  o.n_orb_B = n;
  o.n_span = 2 * n;
  o.n_elec_A = 2;
  o.n_elec_B = 2;
  o.seed = 11;
  o.overlap_noise = 0.05;
  return make_kernel_dimer(o);
}

void BM_BuildCoefficients(benchmark::State& state) {
  const DimerTensors t = bench_dimer(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_majorana_coefficients(t));
}
BENCHMARK(BM_BuildCoefficients)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

void BM_FactorizeVP(benchmark::State& state) {
  const MajoranaCoefficientSet c = build_majorana_coefficients(bench_dimer(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(factorize(*c.VP));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FactorizeVP)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond)->Complexity();

void BM_AllNorms(benchmark::State& state) {
  const MajoranaCoefficientSet c = build_majorana_coefficients(bench_dimer(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(all_norms(c, 0.0));
}
BENCHMARK(BM_AllNorms)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

void BM_FactorizeHamiltonian(benchmark::State& state) {
  const MonomerIntegrals m = make_random_monomer(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(factorize_hamiltonian(m.h1, m.eri));
}
BENCHMARK(BM_FactorizeHamiltonian)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

}  // namespace
