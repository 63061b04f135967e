// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

/**
 * @file acceptance.cpp
 * @brief Prints one PASS/FAIL/SKIP line per acceptance criterion and exits
 * nonzero when any criterion fails.
 *
 * Criterion 11 reads published tensor archives from the directory named by
 * SAPTEVE_EXTERNAL_DATA (water_ccpvdz.sapteve, heme_artemisinin.sapteve) and
 * is skipped when they are absent.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sapteve/active_space.hpp"
#include "sapteve/costing.hpp"
#include "sapteve/factorization.hpp"
#include "sapteve/fock_oracle.hpp"
#include "sapteve/io.hpp"
#include "sapteve/norms.hpp"
#include "sapteve/synthetic.hpp"
#include "sapteve/verification.hpp"

using namespace sapteve;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Status::kPass : Status::kFail, std::move(detail)}; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

double to_double(const ToffoliCount& c) { return c.convert_to<double>(); }

/** @brief Heme-artemisinin system data of the benchmark table. */
SystemParams heme_params() {
  SystemParams p;
  p.lambda_A = 232.2;
  p.lambda_B = 361.8;
  p.gap_A = 0.0069;
  p.gap_B = 0.1212;
  p.overlap_A = 0.068174;
  p.overlap_B = 0.800254;
  p.n_orb_A = 43;
  p.n_orb_B = 40;
  return p;
}

ObservableEstimate estimate(Observable o, double lambda, double eps, const SystemParams& p,
                            const CalibrationConstants& c = {}) {
  return estimate_observable(o, lambda, eps, p, default_observable_shape(o, p.n_orb_A, p.n_orb_B), c);
}

/** @brief Norms inferred from the table's Lambda column (the printed lambdas are rounded). */
constexpr double kLambdaV = 65.54;
constexpr double kLambdaP = 6.35;
constexpr double kLambdaVP = 537.3;
constexpr double kEpsTarg = 0.0016;

Outcome budget_reproduction() {
  const auto t0 = Clock::now();
  const ErrorBudget b = budget_errors(kLambdaV, kLambdaP, kLambdaVP, kEpsTarg);
  const double ms = 1e3 * seconds_since(t0);
  const bool ok = within_rel(b.eps_V, 7.29e-5, 5e-3) && within_rel(b.eps_VP, 5.66e-4, 5e-3) &&
                  within_rel(b.eps_P, 7.60e-6, 5e-3) && ms < 1.0;
  return pass_if(ok, fmt::format("eps_V={:.4g} eps_VP={:.4g} eps_P={:.4g} (tol 0.5%), {:.3f} ms (< 1 ms)",
                                 b.eps_V, b.eps_VP, b.eps_P, ms));
}

Outcome lambda_consistency() {
  const struct {
    const char* name;
    double lambda;
    double eps;
    double Lambda;
  } rows[] = {{"V", 65.5, 7.29e-5, 8.99e5}, {"VP", 537.3, 5.66e-4, 9.49e5}, {"P", 6.3, 7.60e-6, 8.35e5}};
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.lambda / r.eps / r.Lambda - 1.0));
  return pass_if(worst <= 1e-2, fmt::format("worst relative deviation {:.3e} (tol 1e-2)", worst));
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937 rng(20260101);
  std::uniform_int_distribution<int> n_orb(1, 3);
  double worst = 0.0;
  int count = 0;
  for (; count < 100; ++count) {
    KernelDimerOptions o;
    o.n_orb_A = n_orb(rng);
    o.n_orb_B = n_orb(rng);
    o.n_span = o.n_orb_A + o.n_orb_B + 1;
    o.n_elec_A = o.n_orb_A;
    o.n_elec_B = o.n_orb_B;
    o.seed = static_cast<unsigned>(rng());
    o.overlap_noise = 0.05;
    const DimerTensors t = make_kernel_dimer(o);
    const DimerFockSpace space(o.n_orb_A, o.n_orb_B);
    const MajoranaCoefficientSet c = build_majorana_coefficients(t);
    const std::pair<Observable, const SaptCoefficients*> ops[] = {
        {Observable::kV, &c.V}, {Observable::kP, &c.P}, {Observable::kVP, &*c.VP}};
    for (const auto& [obs, coeffs] : ops) {
      const SparseOperator ref = excitation_operator(obs, t, space);
      const SparseOperator maj = majorana_operator(*coeffs, space);
      const double scale = std::max(1.0, max_abs_entry(ref));
      worst = std::max({worst, max_abs_difference(ref, maj) / scale, hermiticity_error(maj) / scale,
                        number_commutator_error(maj, space) / scale});
    }
  }
  const double s = seconds_since(t0);
  return pass_if(worst <= 1e-12 && s < 60.0,
                 fmt::format("{} dimers, worst scaled deviation {:.3e} (tol 1e-12), {:.1f} s (< 60 s)", count,
                             worst, s));
}

Outcome factorization_round_trip() {
  double worst = 0.0;
  double worst_bound = 0.0;
  int blocks = 0;
  for (int n = 1; n <= 8; ++n) {
    KernelDimerOptions o;
    o.n_orb_A = n;
    o.n_orb_B = std::max(1, n - 1);
    o.n_span = o.n_orb_A + o.n_orb_B + 1;
    o.n_elec_A = std::min(2, 2 * o.n_orb_A);
    o.n_elec_B = std::min(2, 2 * o.n_orb_B);
    o.seed = 300u + static_cast<unsigned>(n);
    o.overlap_noise = 0.05;
    const MajoranaCoefficientSet set = build_majorana_coefficients(make_kernel_dimer(o));
    for (const SaptCoefficients* c : {&set.V, &set.P, &*set.VP}) {
      const FactorizedOperator f = factorize(*c);
      for (const auto& [label, block] : c->two_body_blocks) {
        const double scale = block.frobenius_norm();
        const double diff = (reconstruct(f, label) - block).frobenius_norm();
        worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
        ++blocks;
      }
      for (const auto& [label, b] : f.blocks) {
        const double entrywise = l1_norm(c->block(label).permuted(b.layout.perm).grouped());
        worst_bound = std::max(worst_bound, b.outer_l1() - entrywise * (1.0 + 1e-12));
      }
    }
  }
  return pass_if(worst <= 1e-10 && worst_bound <= 0.0,
                 fmt::format("{} blocks up to N=8, worst relative residual {:.3e} (tol 1e-10), "
                             "trace norm <= entrywise l1: {}",
                             blocks, worst, worst_bound <= 0.0 ? "yes" : "no"));
}

Outcome complete_basis_cancellation() {
  double worst_complete = 0.0;
  double least_perturbed = INFINITY;
  for (unsigned k = 0; k < 20; ++k) {
    KernelDimerOptions o;
    o.n_span = 2;
    o.n_orb_A = 2;
    o.n_orb_B = 2;
    o.seed = 500u + k;
    const DimerFockSpace space(2, 2);
    worst_complete = std::max(worst_complete, complete_basis_residual(make_kernel_dimer(o), space));
    o.overlap_noise = 1e-3;
    least_perturbed = std::min(least_perturbed, complete_basis_residual(make_kernel_dimer(o), space));
  }
  return pass_if(worst_complete <= 1e-10 && least_perturbed > 1e-4,
                 fmt::format("20 instances, worst complete residual {:.3e} (tol 1e-10), smallest perturbed "
                             "residual {:.3e} (> 1e-4)",
                             worst_complete, least_perturbed));
}

Outcome active_space_embedding() {
  double worst[3] = {0.0, 0.0, 0.0};
  // Doubly occupied core plus at least one active electron per monomer.
  const int electrons[][2] = {{3, 3}, {4, 3}, {3, 5}, {4, 4}, {5, 4}};
  unsigned seed = 700;
  for (const auto& e : electrons) {
    KernelDimerOptions o;
    o.n_span = 7;
    o.n_orb_A = 3;
    o.n_orb_B = 3;
    o.n_elec_A = e[0];
    o.n_elec_B = e[1];
    o.seed = seed++;
    o.overlap_noise = 0.05;
    const DimerTensors t = make_kernel_dimer(o);
    SpacePartition part;
    part.core_A = {0};
    part.active_A = {1, 2};
    part.core_B = {0};
    part.active_B = {1, 2};
    const auto checks = verify_active_space(t, part, 3, seed, 1.0);
    for (std::size_t i = 0; i < checks.size() && i < 3; ++i) worst[i] = std::max(worst[i], checks[i].value);
  }
  const bool ok = worst[0] <= 1e-10 && worst[1] <= 1e-10 && worst[2] <= 1e-9;
  return pass_if(ok, fmt::format("1 core + 2 active per monomer, worst |<full> - <active>|: V {:.3e}, P {:.3e} "
                                 "(tol 1e-10), VP {:.3e} (tol 1e-9)",
                                 worst[0], worst[1], worst[2]));
}

Outcome qrom_optimum() {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> L_dist(1, 1u << 20);
  std::uniform_int_distribution<std::uint64_t> b_dist(1, 64);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t L = L_dist(rng);
    const std::uint64_t b = b_dist(rng);
    std::uint64_t best = ~std::uint64_t{0};
    for (std::uint64_t k = 1; k <= (std::uint64_t{1} << 22); k *= 2)
      best = std::min(best, (L + k - 1) / k + b * (k - 1));
    if (qrom_cost(L, b).toffolis != best) ++mismatches;
  }
  return pass_if(mismatches == 0, fmt::format("500 (L, b) pairs, {} mismatches (exact)", mismatches));
}

Outcome budget_optimality() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lam(0.1, 1000.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int losses = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double lV = lam(rng), lP = lam(rng), lVP = lam(rng);
    const ErrorBudget b = budget_errors(lV, lP, lVP, kEpsTarg);
    const double opt = lV / b.eps_V + lVP / b.eps_VP + lP / b.eps_P;
    const double w[3] = {1.0 + lP, 1.0, lV};
    for (int s = 0; s < 10000; ++s) {
      // Random point on the constraint simplex: share_i of eps_targ goes to term i.
      double share[3] = {unit(rng), unit(rng), unit(rng)};
      const double sum = share[0] + share[1] + share[2];
      const double eV = kEpsTarg * share[0] / sum / w[0];
      const double eVP = kEpsTarg * share[1] / sum / w[1];
      const double eP = kEpsTarg * share[2] / sum / w[2];
      if (lV / eV + lVP / eVP + lP / eP < opt * (1.0 - 1e-12)) ++losses;
    }
  }
  return pass_if(losses == 0, fmt::format("50 triples x 10^4 feasible samples, {} beat the allocation", losses));
}

Outcome cost_scaling() {
  const SystemParams p = heme_params();
  const ErrorBudget b = budget_errors(kLambdaV, kLambdaP, kLambdaVP, kEpsTarg);
  const std::pair<Observable, std::pair<double, double>> rows[] = {{Observable::kV, {kLambdaV, b.eps_V}},
                                                                   {Observable::kVP, {kLambdaVP, b.eps_VP}},
                                                                   {Observable::kP, {kLambdaP, b.eps_P}}};
  bool doubling_ok = true;
  double worst_ratio = 0.0;
  for (const auto& [obs, le] : rows) {
    const auto base = estimate(obs, le.first, le.second, p);
    const auto twice = estimate(obs, le.first, le.second / 2.0, p);
    const double r = to_double(twice.graph.total()) / to_double(base.graph.total());
    const double hi = 2.0 * (1.0 + std::log(2.0) / std::log(base.details.Lambda));
    doubling_ok = doubling_ok && r >= 2.0 * (1.0 - 1e-9) && r <= hi;
    worst_ratio = std::max(worst_ratio, r);
  }
  SystemParams half = p;
  half.gap_A /= 2.0;
  const auto base = estimate(Observable::kV, kLambdaV, b.eps_V, p);
  const auto halved = estimate(Observable::kV, kLambdaV, b.eps_V, half);
  const double iqpe = to_double(*base.graph.per_call("iQPE_A"));
  const double iqpe2 = to_double(*halved.graph.per_call("iQPE_A"));
  const double bh = to_double(*base.graph.per_call("B[H_A]"));
  const bool gap_ok = iqpe2 >= 2.0 * iqpe - bh && iqpe2 <= 2.0 * iqpe;

  // Least-squares exponent of log cost against log(L_V + L_P), component costs linear in L.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::uint64_t L = 1u << 8; L <= (1u << 18); L *= 2, ++n) {
    const double x = std::log(2.0 * static_cast<double>(L));
    const double y = std::log(to_double(vp4_product_cost(ToffoliCount(3 * L), ToffoliCount(5 * L), L, L).toffolis));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool vp4_ok = std::abs(exponent - 1.0) <= 0.1;
  return pass_if(doubling_ok && gap_ok && vp4_ok,
                 fmt::format("doubling Lambda: max ratio {:.4f} within bounds: {}; halved gap iQPE_A ratio {:.4f}; "
                             "VP4 exponent {:.3f} (1.0 +- 0.1)",
                             worst_ratio, doubling_ok ? "yes" : "no", iqpe2 / iqpe, exponent));
}

Outcome calibrated_table() {
  const SystemParams p = heme_params();
  const ErrorBudget b = budget_errors(kLambdaV, kLambdaP, kLambdaVP, kEpsTarg);
  const auto calib = calibrate_qsp_prefactor(Observable::kV, kLambdaV, b.eps_V, p,
                                             default_observable_shape(Observable::kV, p.n_orb_A, p.n_orb_B), {},
                                             9.74e19);
  const auto vp = estimate(Observable::kVP, kLambdaVP, b.eps_VP, p, calib);
  const auto pp = estimate(Observable::kP, kLambdaP, b.eps_P, p, calib);
  const double rvp = to_double(vp.graph.total()) / 8.63e19;
  const double rp = to_double(pp.graph.total()) / 1.10e20;
  bool additive = true;
  for (const CostGraph* g : {&vp.graph, &pp.graph}) {
    ToffoliCount leaves = 0;
    for (auto id : g->leaves()) leaves += g->node(id).local * g->total_calls(id);
    additive = additive && leaves == g->total();
  }
  auto in3 = [](double r) { return r >= 1.0 / 3.0 && r <= 3.0; };
  return pass_if(in3(rvp) && in3(rp) && additive,
                 fmt::format("fit qsp_prefactor={:.4g} on V; VP/table {:.3f}, P/table {:.3f} (within x3); "
                             "leaf sums equal totals: {}",
                             calib.qsp_prefactor, rvp, rp, additive ? "yes" : "no"));
}

Outcome external_data() {
  const char* dir = std::getenv("SAPTEVE_EXTERNAL_DATA");
  if (!dir) return {Status::kSkip, "SAPTEVE_EXTERNAL_DATA not set"};
  const std::filesystem::path water = std::filesystem::path(dir) / "water_ccpvdz.sapteve";
  const std::filesystem::path heme = std::filesystem::path(dir) / "heme_artemisinin.sapteve";
  if (!std::filesystem::exists(water) || !std::filesystem::exists(heme))
    return {Status::kSkip, fmt::format("archives not found in {}", dir)};
  const TensorArchive w = load_archive(water);
  double lambda_v = 0.0;
  for (const auto& r : all_norms(build_majorana_coefficients(w.dimer()), 0.0))
    if (r.observable == Observable::kV && r.representation == Representation::kTensorFactorized) lambda_v = r.total;
  const TensorArchive h = load_archive(heme);
  auto [h1, eri] = h.monomer_hamiltonian('A');
  const SpacePartition part = h.partition();
  const FrozenCoreHamiltonian fc = frozen_core_hamiltonian(h1, eri, part.core_A, part.active_A);
  const double lambda_a = df_hamiltonian_norm(factorize_hamiltonian(fc.h1, fc.eri));
  return pass_if(within_rel(lambda_v, 13.05, 1e-2) && within_rel(lambda_a, 232.2, 1e-2),
                 fmt::format("lambda_V(tf, water/cc-pVDZ)={:.4g} (13.05 +- 1%), lambda_A(heme)={:.4g} "
                             "(232.2 +- 1%)",
                             lambda_v, lambda_a));
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"error-budget reproduction", budget_reproduction},
      {"Lambda consistency", lambda_consistency},
      {"oracle equivalence", oracle_equivalence},
      {"factorization round trip", factorization_round_trip},
      {"complete-basis cancellation", complete_basis_cancellation},
      {"active-space embedding", active_space_embedding},
      {"QROM optimum", qrom_optimum},
      {"budget optimality", budget_optimality},
      {"cost-model scaling", cost_scaling},
      {"calibrated table check", calibrated_table},
      {"external-data check", external_data},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Status::kFail, fmt::format("exception: {}", e.what())};
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    if (o.status == Status::kFail) ++failures;
    fmt::print("[{}] {:>2}. {}: {}\n", tag, index++, name, o.detail);
  }
  return failures == 0 ? 0 : 1;
}
