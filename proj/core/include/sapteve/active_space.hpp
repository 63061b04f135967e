// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <vector>

#include "sapteve/tensor_core.hpp"

namespace sapteve {

/**
 * @brief Core/active split of both monomers' spatial orbitals.
 *
 * Core orbitals are doubly occupied. Orbitals in neither list are virtual and
 * are removed from the basis before any contraction. Index lists refer to
 * the full orbital ranges and are used in the order given.
 */
struct SpacePartition {
  std::vector<int> core_A;
  std::vector<int> active_A;
  std::vector<int> core_B;
  std::vector<int> active_B;

  /** @brief Active electrons of A: n_elec_A - 2 |core_A|. */
  int active_electrons_A(const DimerBasis& basis) const;
  /** @brief Active electrons of B: n_elec_B - 2 |core_B|. */
  int active_electrons_B(const DimerBasis& basis) const;

  /**
   * @brief Checks ranges, disjointness and electron counts.
   * @throws PartitionError on violation.
   */
  void validate(const DimerBasis& basis) const;

  /** @brief Partition with every orbital active. */
  static SpacePartition all_active(const DimerBasis& basis);
};

/**
 * @brief Restricts all tensors to the listed orbitals, in list order.
 * @throws DimensionError on an out-of-range index.
 */
DimerTensors restrict_orbitals(const DimerTensors& t,
                               const std::vector<int>& orbitals_A,
                               const std::vector<int>& orbitals_B);

/**
 * @brief Electrostatic coefficients on the active space.
 *
 * The frozen-core constant and one-body terms are absorbed into the active
 * two-body tensor through the active electron counts,
 * v~ = v + 2 f_B^core (x) delta / n_B + 2 delta (x) f_A^core / n_A
 *    + 4 c^core delta (x) delta / (n_A n_B),
 * which is exact on states with those electron counts. Absorption is skipped
 * when either active space is empty.
 *
 * @throws PartitionError for an invalid partition or a nonempty active space
 * without active electrons.
 */
SaptCoefficients renormalize_electrostatic(const DimerTensors& t,
                                           const SpacePartition& part);

/**
 * @brief Exchange coefficients on the active space.
 * @throws PartitionError for an invalid partition.
 */
SaptCoefficients renormalize_exchange(const DimerTensors& t,
                                      const SpacePartition& part);

/**
 * @brief Electrostatic-exchange coefficients on the active space.
 *
 * Every slot of the full-space coefficient set is projected onto states with
 * doubly occupied cores. Products of two pair operators on one monomer also
 * pick up the contraction through an intermediate core hole, which lands in
 * lower slots. The product term keeps the form 1/2{V', P'} with the bare
 * active v and the core-renormalized exchange one-body arrays.
 *
 * @throws PartitionError for an invalid partition.
 * @throws DimensionError if the mixed integral blocks are absent.
 */
SaptCoefficients renormalize_vp(const DimerTensors& t,
                                const SpacePartition& part);

/** @brief All three active coefficient sets (VP only with mixed blocks). */
MajoranaCoefficientSet build_active_coefficients(const DimerTensors& t,
                                                 const SpacePartition& part);

/** @brief Active-space monomer Hamiltonian with the frozen cores folded in. */
struct FrozenCoreHamiltonian {
  double core_energy = 0.0;  ///< Energy of the doubly occupied cores.
  Matrix h1;                 ///< h_tu + sum_c [2 (tu|cc) - (tc|cu)].
  Tensor4 eri;               ///< (tu|vw) restricted to the active orbitals.
};

/**
 * @brief Folds doubly occupied core orbitals of a monomer Hamiltonian
 * (chemist-notation integrals) into an active-space Hamiltonian.
 *
 * On states with the cores doubly occupied, the full Hamiltonian equals the
 * active Hamiltonian plus core_energy.
 *
 * @throws PartitionError if the lists overlap or leave the orbital range.
 */
FrozenCoreHamiltonian frozen_core_hamiltonian(const Matrix& h1, const Tensor4& eri,
                                              const std::vector<int>& core,
                                              const std::vector<int>& active);

}  // namespace sapteve
