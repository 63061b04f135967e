// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/verification.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sapteve/factorization.hpp"
#include "sapteve/fock_oracle.hpp"
#include "sapteve/synthetic.hpp"

namespace sapteve {
namespace {

CheckResult check(std::string name, double value, double tol) {
  return {std::move(name), value <= tol, value, tol};
}

double relative_residual(const Tensor4& ref, const Tensor4& got) {
  const double scale = ref.frobenius_norm();
  const double diff = (got - ref).frobenius_norm();
  return scale == 0.0 ? diff : diff / scale;
}

}  // namespace

std::vector<CheckResult> verify_dimer(const DimerTensors& t, double tol) {
  const DimerFockSpace space(t.basis.n_orb_A, t.basis.n_orb_B);
  const MajoranaCoefficientSet set = build_majorana_coefficients(t);
  std::vector<CheckResult> out;
  auto run = [&](Observable o, const SaptCoefficients& c) {
    const std::string tag = to_string(o);
    const SparseOperator maj = majorana_operator(c, space);
    const SparseOperator exc = excitation_operator(o, t, space);
    out.push_back(check(tag + " majorana = excitation", max_abs_difference(maj, exc), tol));
    out.push_back(check(tag + " symmetric", hermiticity_error(maj), tol));
    out.push_back(check(tag + " number conserving", number_commutator_error(maj, space), tol));
    const FactorizedOperator f = factorize(c);
    double worst = 0.0;
    for (const auto& [label, block] : c.two_body_blocks)
      if (f.has_block(label)) worst = std::max(worst, relative_residual(block, reconstruct(f, label)));
    out.push_back(check(tag + " factorization round trip", worst, tol));
  };
  run(Observable::kV, set.V);
  run(Observable::kP, set.P);
  if (set.VP) run(Observable::kVP, *set.VP);
  return out;
}

std::vector<CheckResult> verify_active_space(const DimerTensors& t, const SpacePartition& part,
                                             int n_states, unsigned seed, double tol) {
  part.validate(t.basis);
  const DimerFockSpace full(t.basis.n_orb_A, t.basis.n_orb_B);
  const DimerFockSpace act(static_cast<int>(part.active_A.size()),
                           static_cast<int>(part.active_B.size()));
  const MajoranaCoefficientSet fc = build_majorana_coefficients(restrict_orbitals(
      t,
      [&] {
        std::vector<int> o = part.core_A;
        o.insert(o.end(), part.active_A.begin(), part.active_A.end());
        return o;
      }(),
      [&] {
        std::vector<int> o = part.core_B;
        o.insert(o.end(), part.active_B.begin(), part.active_B.end());
        return o;
      }()));
  const MajoranaCoefficientSet ac = build_active_coefficients(t, part);
  // Orbital positions after restriction: cores first, then actives.
  auto positions = [](std::size_t offset, std::size_t n) {
    std::vector<int> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<int>(offset + i));
    return v;
  };
  const auto coreA = positions(0, part.core_A.size());
  const auto actA = positions(part.core_A.size(), part.active_A.size());
  const auto coreB = positions(0, part.core_B.size());
  const auto actB = positions(part.core_B.size(), part.active_B.size());
  const int na = part.active_electrons_A(t.basis);
  const int nb = part.active_electrons_B(t.basis);

  std::vector<std::pair<const SaptCoefficients*, const SaptCoefficients*>> ops = {{&fc.V, &ac.V},
                                                                                  {&fc.P, &ac.P}};
  if (fc.VP && ac.VP) ops.emplace_back(&*fc.VP, &*ac.VP);
  std::vector<SparseOperator> full_ops;
  std::vector<SparseOperator> act_ops;
  for (const auto& [f, a] : ops) {
    full_ops.push_back(majorana_operator(*f, full));
    act_ops.push_back(majorana_operator(*a, act));
  }
  std::vector<double> worst(ops.size(), 0.0);
  for (int k = 0; k < n_states; ++k) {
    // Entangled state: a sum of two product states in the active sectors.
    Vector psi_act = Vector::Zero(act.dim());
    Vector psi_full = Vector::Zero(full.dim());
    for (unsigned term = 0; term < 2; ++term) {
      const unsigned s = seed + 97u * static_cast<unsigned>(k) + 13u * term;
      const Vector pa = random_sector_state(act.A(), na, na % 2, s);
      const Vector pb = random_sector_state(act.B(), nb, nb % 2, s + 5u);
      psi_act += act.product_state(pa, pb);
      psi_full += full.product_state(embed_frozen_core(full.A(), coreA, actA, pa),
                                     embed_frozen_core(full.B(), coreB, actB, pb));
    }
    const double norm = psi_act.norm();
    psi_act /= norm;
    psi_full /= norm;
    for (std::size_t i = 0; i < ops.size(); ++i)
      worst[i] = std::max(worst[i], std::abs(expectation(full_ops[i], psi_full) -
                                             expectation(act_ops[i], psi_act)));
  }
  std::vector<CheckResult> out;
  const char* names[] = {"V", "P", "VP"};
  for (std::size_t i = 0; i < ops.size(); ++i)
    out.push_back(check(fmt::format("{} frozen-core expectation", names[i]), worst[i], tol));
  return out;
}

DimerTensors builtin_verification_dimer() {
  KernelDimerOptions opt;
  opt.n_span = 3;
  opt.n_orb_A = 2;
  opt.n_orb_B = 2;
  opt.n_elec_A = 2;
  opt.n_elec_B = 2;
  opt.seed = 2024;
  opt.overlap_noise = 0.05;
  return make_kernel_dimer(opt);
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace sapteve
