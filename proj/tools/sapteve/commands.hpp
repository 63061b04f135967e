// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sapteve/io.hpp"

namespace sapteve::cli {

/** @brief Process exit codes. */
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitDataError = 3,
};

/** @brief Raised for option combinations CLI11 cannot express. */
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** @brief Options shared by every subcommand. */
struct CommonOptions {
  std::string config_path;
  std::optional<double> eps;
  std::optional<double> threshold;
  std::vector<std::string> calibration;  ///< "key=value" overrides.
  std::vector<std::string> observables;
  std::string output;                   ///< File to write instead of stdout.

  /** @brief Run configuration with command-line overrides applied. */
  RunConfig resolve() const;
};

struct FactorizeOptions {
  std::string archive;
  bool active = false;
  std::string output_dir;
};

struct NormsOptions {
  std::string archive;
  bool active = false;
  std::string representation = "both";
  std::string format = "tsv";
};

struct BudgetOptions {
  double lambda_V = 0.0;
  double lambda_P = 0.0;
  double lambda_VP = 0.0;
  std::optional<double> expect_V;
  std::optional<double> expect_P;
  std::string format = "text";
};

struct EstimateOptions {
  std::string archive;
  bool active = false;
  std::string representation = "tf";
  std::optional<double> lambda_V, lambda_P, lambda_VP;
  std::optional<double> lambda_A, lambda_B, gap_A, gap_B, overlap_A, overlap_B;
  std::optional<int> n_A, n_B;
  std::optional<double> calibrate_total;
  std::string calibrate_observable = "V";
  std::string format = "tsv";
};

struct SupermolecularOptions {
  double lambda_AB = 0.0, lambda_A = 0.0, lambda_B = 0.0;
  int n_AB = 0, n_A = 0, n_B = 0;
  std::string format = "tsv";
};

struct VerifyOptions {
  std::string archive;
  double tolerance = 1e-10;
};

struct ConvertOptions {
  std::string fcidump;
  std::string monomer = "A";
  std::string archive;
  std::optional<double> gap;
  std::optional<double> overlap;
};

int run_factorize(const CommonOptions& common, const FactorizeOptions& o);
int run_norms(const CommonOptions& common, const NormsOptions& o);
int run_budget(const CommonOptions& common, const BudgetOptions& o);
int run_estimate(const CommonOptions& common, const EstimateOptions& o);
int run_supermolecular(const CommonOptions& common, const SupermolecularOptions& o);
int run_verify(const CommonOptions& common, const VerifyOptions& o);
int run_convert_fcidump(const CommonOptions& common, const ConvertOptions& o);

}  // namespace sapteve::cli
