// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include "sapteve/tensor_core.hpp"

namespace sapteve {

/**
 * @brief Options for a dimer whose integrals derive from one shared kernel.
 *
 * Both monomers get orthonormal orbitals inside a common span of dimension
 * n_span. A random two-electron kernel K on that span, symmetric in (ij), in
 * (kl) and under (ij)<->(kl), is transformed into every intermolecular block,
 * so all blocks describe the same physical interaction. With
 * n_span == n_orb_A == n_orb_B both orbital sets are complete in the span.
 */
struct KernelDimerOptions {
  int n_span = 4;
  int n_orb_A = 2;
  int n_orb_B = 2;
  int n_elec_A = 2;
  int n_elec_B = 2;
  unsigned seed = 1;
  double kernel_scale = 0.1;       ///< Standard deviation of kernel entries.
  double overlap_noise = 0.0;      ///< Uniform noise added to S afterwards.
  bool with_exchange_blocks = true;
};

/**
 * @brief Builds a dimer from a shared kernel.
 * @throws DimensionError if an orbital count exceeds n_span or is below 1.
 */
DimerTensors make_kernel_dimer(const KernelDimerOptions& opt);

/**
 * @brief Random monomer integrals (h symmetric, eri with 8-fold symmetry).
 */
struct MonomerIntegrals {
  Matrix h1;
  Tensor4 eri;  ///< Chemist notation (pq|rs).
};

/** @brief Draws random monomer integrals for tests and benchmarks. */
MonomerIntegrals make_random_monomer(int n_orb, unsigned seed,
                                     double scale = 0.2);

}  // namespace sapteve
