// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <benchmark/benchmark.h>

#include "sapteve/fock_oracle.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;

namespace {

void BM_MajoranaOperatorVP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  KernelDimerOptions o;
  o.n_orb_A = n;
  o.n_orb_B = n;
  o.n_span = 2 * n + 1;
  o.n_elec_A = n;
  o.n_elec_B = n;
  o.overlap_noise = 0.05;
  const MajoranaCoefficientSet c = build_majorana_coefficients(make_kernel_dimer(o));
  const DimerFockSpace space(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(majorana_operator(*c.VP, space));
}
BENCHMARK(BM_MajoranaOperatorVP)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ExcitationOperatorVP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  KernelDimerOptions o;
  o.n_orb_A = n;
  o.n_orb_B = n;
  o.n_span = 2 * n + 1;
  o.n_elec_A = n;
  o.n_elec_B = n;
  o.overlap_noise = 0.05;
  const DimerTensors t = make_kernel_dimer(o);
  const DimerFockSpace space(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(excitation_operator(Observable::kVP, t, space));
}
BENCHMARK(BM_ExcitationOperatorVP)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
