// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <string>
#include <vector>

#include "sapteve/active_space.hpp"
#include "sapteve/tensor_core.hpp"

namespace sapteve {

/** @brief Outcome of one oracle check. */
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< Measured deviation.
  double tolerance = 0.0;  ///< Largest accepted deviation.
};

/**
 * @brief Brute-force checks of one small dimer.
 *
 * For V, P and (with mixed blocks) VP: the Majorana-form matrix against the
 * excitation-form matrix, symmetry of the matrix, and commutation with both
 * number operators. Every two-body block is also factorized and
 * reconstructed. All deviations are absolute and compared to @p tol, except
 * the factorization residual, which is relative.
 *
 * @throws OracleError if the dimer exceeds the Fock-space cap.
 */
std::vector<CheckResult> verify_dimer(const DimerTensors& t, double tol = 1e-10);

/**
 * @brief Frozen-core check: expectation values of the full-space operators
 * on embedded states against the active-space operators on the active states.
 *
 * Uses @p n_states random states in the active electron sectors.
 */
std::vector<CheckResult> verify_active_space(const DimerTensors& t, const SpacePartition& part,
                                             int n_states = 3, unsigned seed = 1,
                                             double tol = 1e-9);

/** @brief Two-orbital dimer used by the command-line verify subcommand. */
DimerTensors builtin_verification_dimer();

/** @brief True when every check passed. */
bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace sapteve
