// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <CLI11.hpp>
#include <exception>
#include <functional>
#include <iostream>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

using namespace sapteve;
using namespace sapteve::cli;

namespace {

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--eps", c.eps, "Target precision eps_targ in Hartree (default 0.0016)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--threshold", c.threshold, "Relative truncation threshold of the factorization")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--calibration", c.calibration, "Calibration override key=value (repeatable)");
  sub->add_option("--observable", c.observables, "Observable V, P or VP (repeatable)");
  sub->add_option("-o,--output", c.output, "Write the result to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource estimates for first-order SAPT observables on a fault-tolerant quantum computer"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOptions common;
  std::string log_level = "warn";
  app.add_option("--config", common.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::function<int()> action;

  FactorizeOptions fo;
  auto* factorize = app.add_subcommand("factorize", "Factorize the observables of an archive into cache files");
  factorize->add_option("archive", fo.archive, "Tensor archive")->required();
  factorize->add_flag("--active", fo.active, "Use the stored core/active partition");
  factorize->add_option("--output-dir", fo.output_dir, "Directory of the .factors files");
  add_common(factorize, common);
  factorize->callback([&] { action = [&] { return run_factorize(common, fo); }; });

  NormsOptions no;
  auto* norms = app.add_subcommand("norms", "Report l1 norms of the observables");
  norms->add_option("archive", no.archive, "Tensor archive")->required();
  norms->add_flag("--active", no.active, "Use the stored core/active partition");
  norms->add_option("--representation", no.representation, "sparse, tf or both")
      ->check(CLI::IsMember({"sparse", "tf", "both"}));
  norms->add_option("--format", no.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  add_common(norms, common);
  norms->callback([&] { action = [&] { return run_norms(common, no); }; });

  BudgetOptions bo;
  auto* budget = app.add_subcommand("budget", "Allocate the precision budget over V, VP and P");
  budget->add_option("--lambda-v", bo.lambda_V, "l1 norm of V")->required();
  budget->add_option("--lambda-p", bo.lambda_P, "l1 norm of P")->required();
  budget->add_option("--lambda-vp", bo.lambda_VP, "l1 norm of VP")->required();
  budget->add_option("--expect-v", bo.expect_V, "Low-precision <V> replacing lambda_V in the constraint");
  budget->add_option("--expect-p", bo.expect_P, "Low-precision <P> replacing lambda_P in the constraint");
  budget->add_option("--format", bo.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  add_common(budget, common);
  budget->callback([&] { action = [&] { return run_budget(common, bo); }; });

  EstimateOptions eo;
  auto* estimate = app.add_subcommand("estimate", "Toffoli and qubit estimates of the observables");
  estimate->add_option("--archive", eo.archive, "Tensor archive supplying norms and system data");
  estimate->add_flag("--active", eo.active, "Use the stored core/active partition");
  estimate->add_option("--representation", eo.representation, "sparse or tf norms from the archive")
      ->check(CLI::IsMember({"sparse", "tf"}));
  estimate->add_option("--lambda-v", eo.lambda_V, "l1 norm of V");
  estimate->add_option("--lambda-p", eo.lambda_P, "l1 norm of P");
  estimate->add_option("--lambda-vp", eo.lambda_VP, "l1 norm of VP");
  estimate->add_option("--lambda-a", eo.lambda_A, "DF norm of H_A");
  estimate->add_option("--lambda-b", eo.lambda_B, "DF norm of H_B");
  estimate->add_option("--gap-a", eo.gap_A, "Spectral gap of H_A (Hartree)");
  estimate->add_option("--gap-b", eo.gap_B, "Spectral gap of H_B (Hartree)");
  estimate->add_option("--overlap-a", eo.overlap_A, "Initial-state overlap |<init|0>|^2 of A");
  estimate->add_option("--overlap-b", eo.overlap_B, "Initial-state overlap |<init|0>|^2 of B");
  estimate->add_option("--n-a", eo.n_A, "Spatial orbitals of A");
  estimate->add_option("--n-b", eo.n_B, "Spatial orbitals of B");
  estimate->add_option("--calibrate-total", eo.calibrate_total,
                       "Fit the QSP prefactor so this observable's total matches the value");
  estimate->add_option("--calibrate-observable", eo.calibrate_observable, "Observable of the calibration fit");
  estimate->add_option("--format", eo.format, "tsv, json or dot")->check(CLI::IsMember({"tsv", "json", "dot"}));
  add_common(estimate, common);
  estimate->callback([&] { action = [&] { return run_estimate(common, eo); }; });

  SupermolecularOptions so;
  auto* super = app.add_subcommand("supermolecular", "Cost of three phase estimations E_AB - E_A - E_B");
  super->add_option("--lambda-ab", so.lambda_AB, "DF norm of H_AB")->required();
  super->add_option("--lambda-a", so.lambda_A, "DF norm of H_A")->required();
  super->add_option("--lambda-b", so.lambda_B, "DF norm of H_B")->required();
  super->add_option("--n-ab", so.n_AB, "Spatial orbitals of AB")->required();
  super->add_option("--n-a", so.n_A, "Spatial orbitals of A")->required();
  super->add_option("--n-b", so.n_B, "Spatial orbitals of B")->required();
  super->add_option("--format", so.format, "tsv, json or dot")->check(CLI::IsMember({"tsv", "json", "dot"}));
  add_common(super, common);
  super->callback([&] { action = [&] { return run_supermolecular(common, so); }; });

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle suite on a small dimer");
  verify->add_option("archive", vo.archive, "Small tensor archive (default: built-in two-orbital dimer)");
  verify->add_option("--tolerance", vo.tolerance, "Largest accepted deviation")->check(CLI::PositiveNumber);
  add_common(verify, common);
  verify->callback([&] { action = [&] { return run_verify(common, vo); }; });

  ConvertOptions co;
  auto* convert = app.add_subcommand("convert-fcidump", "Store an FCIDUMP monomer Hamiltonian in an archive");
  convert->add_option("fcidump", co.fcidump, "FCIDUMP file")->required()->check(CLI::ExistingFile);
  convert->add_option("--monomer", co.monomer, "A or B")->check(CLI::IsMember({"A", "B"}));
  convert->add_option("--archive", co.archive, "Archive to create or update")->required();
  convert->add_option("--gap", co.gap, "Spectral gap of the monomer (Hartree)");
  convert->add_option("--overlap", co.overlap, "Initial-state overlap of the monomer");
  add_common(convert, common);
  convert->callback([&] { action = [&] { return run_convert_fcidump(common, co); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto logger = spdlog::stderr_color_st("sapteve");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    return action();
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ArchiveError& e) {
    spdlog::error("data error (code {}): {}", static_cast<int>(e.code()), e.what());
    return kExitDataError;
  } catch (const std::exception& e) {
    spdlog::error("data error: {}", e.what());
    return kExitDataError;
  }
}
