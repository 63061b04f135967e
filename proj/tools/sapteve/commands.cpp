// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "commands.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sapteve/verification.hpp"

namespace sapteve::cli {
namespace {

using json = nlohmann::ordered_json;

void emit(const CommonOptions& common, const std::string& text) {
  if (common.output.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file(common.output, text);
    spdlog::info("wrote {}", common.output);
  }
}

std::vector<Observable> selected(const RunConfig& config) { return config.observables; }

MajoranaCoefficientSet coefficient_set(const TensorArchive& a, bool active) {
  const DimerTensors t = a.dimer();
  if (active) {
    if (!a.has_partition()) spdlog::warn("archive stores no core orbitals; the active space is the full space");
    return build_active_coefficients(t, a.partition());
  }
  return build_majorana_coefficients(t);
}

const SaptCoefficients* pick(const MajoranaCoefficientSet& set, Observable o) {
  switch (o) {
    case Observable::kV: return &set.V;
    case Observable::kP: return &set.P;
    case Observable::kVP: return set.VP ? &*set.VP : nullptr;
  }
  return nullptr;
}

std::vector<Representation> representations(const std::string& r) {
  if (r == "both") return {Representation::kSparse, Representation::kTensorFactorized};
  try {
    return {parse_representation(r)};
  } catch (const std::invalid_argument&) {
    throw UsageError(fmt::format("unknown representation '{}' (sparse, tf or both)", r));
  }
}

/** @brief DF norm of a monomer Hamiltonian, folded onto the active orbitals when asked. */
double monomer_lambda(const TensorArchive& a, char monomer, bool active) {
  auto [h1, eri] = a.monomer_hamiltonian(monomer);
  if (active) {
    const SpacePartition p = a.partition();
    const auto& core = monomer == 'A' ? p.core_A : p.core_B;
    const auto& act = monomer == 'A' ? p.active_A : p.active_B;
    const FrozenCoreHamiltonian fc = frozen_core_hamiltonian(h1, eri, core, act);
    h1 = fc.h1;
    eri = fc.eri;
  }
  return df_hamiltonian_norm(factorize_hamiltonian(h1, eri));
}

std::string check_lines(const std::vector<CheckResult>& checks) {
  std::string out;
  for (const auto& c : checks)
    out += fmt::format("{}  {:<40} {:.3e} (tol {:.1e})\n", c.passed ? "PASS" : "FAIL", c.name, c.value,
                       c.tolerance);
  return out;
}

}  // namespace

RunConfig CommonOptions::resolve() const {
  RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
  if (eps) c.eps_targ = *eps;
  if (threshold) c.truncation_threshold = *threshold;
  for (const auto& kv : calibration) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("calibration override '{}' is not key=value", kv));
    try {
      c.calibration[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("calibration override '{}' has no numeric value", kv));
    }
  }
  if (!observables.empty()) {
    c.observables.clear();
    for (const auto& o : observables) {
      try {
        c.observables.push_back(parse_observable(o));
      } catch (const std::invalid_argument&) {
        throw UsageError(fmt::format("unknown observable '{}' (V, P or VP)", o));
      }
    }
  }
  c.validate();
  return c;
}

int run_factorize(const CommonOptions& common, const FactorizeOptions& o) {
  const RunConfig config = common.resolve();
  const TensorArchive a = load_archive(o.archive);
  const MajoranaCoefficientSet set = coefficient_set(a, o.active);
  const std::filesystem::path dir = o.output_dir.empty() ? config.output_dir : std::filesystem::path(o.output_dir);
  std::filesystem::create_directories(dir);
  std::string table = "observable\tblock\tterms\tdiscarded_weight\tfile\n";
  for (Observable obs : selected(config)) {
    const SaptCoefficients* c = pick(set, obs);
    if (!c) {
      spdlog::warn("{} needs the mixed integral blocks v_abba, v_aaba, v_abbb; skipped", to_string(obs));
      continue;
    }
    FactorizedOperator f = factorize(*c);
    if (config.truncation_threshold > 0.0) f = truncate(f, config.truncation_threshold);
    const auto path = dir / (to_string(obs) + ".factors");
    save_factorized(f, path);
    for (const auto& [label, b] : f.blocks)
      table += fmt::format("{}\t{}\t{}\t{:.6e}\t{}\n", to_string(obs), label, b.terms.size(),
                           b.discarded_weight, path.string());
  }
  emit(common, table);
  return kExitOk;
}

int run_norms(const CommonOptions& common, const NormsOptions& o) {
  const RunConfig config = common.resolve();
  const auto reps = representations(o.representation);
  if (o.format != "tsv" && o.format != "json") throw UsageError("--format must be tsv or json");
  const TensorArchive a = load_archive(o.archive);
  const MajoranaCoefficientSet set = coefficient_set(a, o.active);
  std::vector<NormReport> out;
  for (Observable obs : selected(config)) {
    if (!pick(set, obs)) {
      spdlog::warn("{} needs the mixed integral blocks; skipped", to_string(obs));
      continue;
    }
    for (const auto& r : all_norms(set, config.truncation_threshold))
      if (r.observable == obs && std::find(reps.begin(), reps.end(), r.representation) != reps.end())
        out.push_back(r);
  }
  emit(common, o.format == "json" ? norms_json(out) : norms_tsv(out));
  return kExitOk;
}

int run_budget(const CommonOptions& common, const BudgetOptions& o) {
  const RunConfig config = common.resolve();
  BudgetOverrides ov;
  ov.expect_V = o.expect_V;
  ov.expect_P = o.expect_P;
  const ErrorBudget b = budget_errors(o.lambda_V, o.lambda_P, o.lambda_VP, config.eps_targ, ov);
  if (o.format == "json") {
    emit(common, budget_json(b));
  } else if (o.format == "text") {
    emit(common, fmt::format("eps_targ\t{:.6e}\neps_V\t{:.6e}\neps_VP\t{:.6e}\neps_P\t{:.6e}\n"
                             "Lambda_V\t{:.6e}\nLambda_VP\t{:.6e}\nLambda_P\t{:.6e}\n",
                             b.eps_targ, b.eps_V, b.eps_VP, b.eps_P, o.lambda_V / b.eps_V,
                             o.lambda_VP / b.eps_VP, o.lambda_P / b.eps_P));
  } else {
    throw UsageError("--format must be text or json");
  }
  return kExitOk;
}

int run_estimate(const CommonOptions& common, const EstimateOptions& o) {
  const RunConfig config = common.resolve();
  if (o.format != "tsv" && o.format != "json" && o.format != "dot")
    throw UsageError("--format must be tsv, json or dot");
  CalibrationConstants calib = config.calibration_constants();

  std::optional<double> lam[3] = {o.lambda_V, o.lambda_P, o.lambda_VP};
  SystemParams params;
  std::optional<double> lamA = o.lambda_A, lamB = o.lambda_B, gapA = o.gap_A, gapB = o.gap_B,
                        ovA = o.overlap_A, ovB = o.overlap_B;
  std::optional<int> nA = o.n_A, nB = o.n_B;
  std::map<Observable, ObservableShape> shapes;

  if (!o.archive.empty()) {
    const TensorArchive a = load_archive(o.archive);
    const MajoranaCoefficientSet set = coefficient_set(a, o.active);
    const auto reps = representations(o.representation);
    if (reps.size() != 1) throw UsageError("estimate needs a single representation");
    const auto reports = all_norms(set, config.truncation_threshold);
    const Observable order[3] = {Observable::kV, Observable::kP, Observable::kVP};
    for (int i = 0; i < 3; ++i)
      for (const auto& r : reports)
        if (r.observable == order[i] && r.representation == reps[0] && !lam[i]) lam[i] = r.total;
    for (Observable obs : order) {
      const SaptCoefficients* c = pick(set, obs);
      if (!c || reps[0] != Representation::kTensorFactorized) continue;
      FactorizedOperator f = factorize(*c);
      if (config.truncation_threshold > 0.0) f = truncate(f, config.truncation_threshold);
      shapes[obs] = observable_shape(f);
    }
    const SpacePartition p = o.active ? a.partition() : SpacePartition::all_active(a.basis());
    if (!nA) nA = static_cast<int>(p.active_A.size());
    if (!nB) nB = static_cast<int>(p.active_B.size());
    if (!lamA && a.has_monomer_hamiltonian('A')) lamA = monomer_lambda(a, 'A', o.active);
    if (!lamB && a.has_monomer_hamiltonian('B')) lamB = monomer_lambda(a, 'B', o.active);
    if (!gapA && a.has("gap_A")) gapA = a.scalar("gap_A");
    if (!gapB && a.has("gap_B")) gapB = a.scalar("gap_B");
    if (!ovA && a.has("overlap_A")) ovA = a.scalar("overlap_A");
    if (!ovB && a.has("overlap_B")) ovB = a.scalar("overlap_B");
  }
  auto need = [](const auto& v, const char* flag) {
    if (!v) throw CostModelError(fmt::format("missing input: pass {} or supply it in the archive", flag));
    return *v;
  };
  const double lV = need(lam[0], "--lambda-v");
  const double lP = need(lam[1], "--lambda-p");
  const double lVP = need(lam[2], "--lambda-vp");
  params.lambda_A = need(lamA, "--lambda-a");
  params.lambda_B = need(lamB, "--lambda-b");
  params.gap_A = need(gapA, "--gap-a");
  params.gap_B = need(gapB, "--gap-b");
  params.overlap_A = ovA.value_or(1.0);
  params.overlap_B = ovB.value_or(1.0);
  params.n_orb_A = need(nA, "--n-a");
  params.n_orb_B = need(nB, "--n-b");
  params.validate();

  const ErrorBudget budget = budget_errors(lV, lP, lVP, config.eps_targ);
  auto lambda_of = [&](Observable obs) {
    return obs == Observable::kV ? lV : obs == Observable::kP ? lP : lVP;
  };
  auto eps_of = [&](Observable obs) {
    return obs == Observable::kV ? budget.eps_V : obs == Observable::kP ? budget.eps_P : budget.eps_VP;
  };
  auto shape_of_obs = [&](Observable obs) {
    auto it = shapes.find(obs);
    return it != shapes.end() ? it->second : default_observable_shape(obs, params.n_orb_A, params.n_orb_B);
  };
  if (o.calibrate_total) {
    Observable cal_obs;
    try {
      cal_obs = parse_observable(o.calibrate_observable);
    } catch (const std::invalid_argument&) {
      throw UsageError(fmt::format("unknown observable '{}'", o.calibrate_observable));
    }
    calib = calibrate_qsp_prefactor(cal_obs, lambda_of(cal_obs), eps_of(cal_obs), params,
                                    shape_of_obs(cal_obs), calib, *o.calibrate_total);
    spdlog::info("calibrated qsp_prefactor = {:.6g}", calib.qsp_prefactor);
  }
  std::vector<ObservableEstimate> estimates;
  for (Observable obs : selected(config))
    estimates.push_back(
        estimate_observable(obs, lambda_of(obs), eps_of(obs), params, shape_of_obs(obs), calib));

  if (o.format == "tsv") {
    emit(common, summary_tsv(estimates));
  } else if (o.format == "dot") {
    std::string text;
    for (const auto& e : estimates) text += emit_callgraph(e.graph, GraphFormat::kDot);
    emit(common, text);
  } else {
    json out = json::array();
    for (const auto& e : estimates)
      out.push_back({{"observable", to_string(e.observable)},
                     {"lambda_F", e.lambda_F},
                     {"eps_F", e.eps_F},
                     {"Lambda_F", e.details.Lambda},
                     {"iterations", e.details.iterations},
                     {"phase_bits", e.details.phase_bits},
                     {"degree_A", e.details.degree_A},
                     {"degree_B", e.details.degree_B},
                     {"calibration", calib.to_map()},
                     {"callgraph", json::parse(emit_callgraph(e.graph, GraphFormat::kJson))}});
    emit(common, out.dump(2) + "\n");
  }
  return kExitOk;
}

int run_supermolecular(const CommonOptions& common, const SupermolecularOptions& o) {
  const RunConfig config = common.resolve();
  const SupermolecularEstimate sm =
      estimate_supermolecular(o.lambda_AB, o.lambda_A, o.lambda_B, o.n_AB, o.n_A, o.n_B, config.eps_targ,
                              config.calibration_constants());
  const CostGraph& g = sm.graph;
  if (o.format == "tsv") {
    std::string text = "run\tlambda\teps\ttoffolis\tqubits\n";
    text += fmt::format("SM\t-\t{:.6e}\t{}\t{}\n", config.eps_targ, to_string(g.total()), g.qubits(g.root()));
    const struct {
      const char* name;
      double lambda;
      double eps;
    } rows[] = {{"E_AB", o.lambda_AB, sm.eps_AB}, {"E_A", o.lambda_A, sm.eps_A}, {"E_B", o.lambda_B, sm.eps_B}};
    for (const auto& r : rows) {
      const auto id = *g.find(r.name);
      text += fmt::format("{}\t{:.6g}\t{:.6e}\t{}\t{}\n", r.name, r.lambda, r.eps, to_string(g.per_call(id)),
                          g.qubits(id));
    }
    emit(common, text);
  } else if (o.format == "json") {
    emit(common, emit_callgraph(g, GraphFormat::kJson));
  } else if (o.format == "dot") {
    emit(common, emit_callgraph(g, GraphFormat::kDot));
  } else {
    throw UsageError("--format must be tsv, json or dot");
  }
  return kExitOk;
}

int run_verify(const CommonOptions& common, const VerifyOptions& o) {
  std::vector<CheckResult> checks;
  if (o.archive.empty()) {
    spdlog::info("verifying the built-in two-orbital dimer");
    checks = verify_dimer(builtin_verification_dimer(), o.tolerance);
  } else {
    const TensorArchive a = load_archive(o.archive);
    const DimerTensors t = a.dimer();
    checks = verify_dimer(t, o.tolerance);
    if (a.has_partition()) {
      const auto active = verify_active_space(t, a.partition(), 3, 1, 100.0 * o.tolerance);
      checks.insert(checks.end(), active.begin(), active.end());
    }
  }
  emit(common, check_lines(checks));
  const bool ok = all_passed(checks);
  if (!ok) spdlog::error("verification failed");
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_convert_fcidump(const CommonOptions& common, const ConvertOptions& o) {
  if (o.monomer != "A" && o.monomer != "B") throw UsageError("--monomer must be A or B");
  const char m = o.monomer[0];
  TensorArchive a;
  if (std::filesystem::exists(o.archive)) {
    a = load_archive(o.archive);
    spdlog::info("updating {}", o.archive);
  }
  insert_monomer(a, m, read_fcidump(o.fcidump));
  if (o.gap) a.set_scalar(std::string("gap_") + m, *o.gap);
  if (o.overlap) a.set_scalar(std::string("overlap_") + m, *o.overlap);
  save_archive(a, o.archive);
  const auto [h1, eri] = a.monomer_hamiltonian(m);
  emit(common, fmt::format("monomer\t{}\nn_orb\t{}\nlambda_DF\t{:.10g}\narchive\t{}\n", m, h1.rows(),
                           df_hamiltonian_norm(factorize_hamiltonian(h1, eri)), o.archive));
  return kExitOk;
}

}  // namespace sapteve::cli
