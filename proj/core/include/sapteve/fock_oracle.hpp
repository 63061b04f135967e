// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "sapteve/tensor_core.hpp"

namespace sapteve {

/** @brief Real sparse matrix used for every Fock-space operator. */
using SparseOperator = Eigen::SparseMatrix<double>;

/** @brief Hard cap on the total number of spin-orbitals of a dimer. */
inline constexpr int kMaxDimerSpinOrbitals = 16;

/**
 * @class MonomerFockSpace
 * @brief Occupation-number space of one monomer with a Jordan-Wigner
 * representation confined to that monomer.
 *
 * Mode m = s * N + p holds spatial orbital p with spin s (alpha block first).
 * Basis state x is the bitstring whose bit m is the occupation of mode m.
 */
class MonomerFockSpace {
 public:
  /**
   * @brief Builds creation operators for @p n_orb spatial orbitals.
   * @throws OracleError if n_orb < 1 or 2 n_orb > kMaxDimerSpinOrbitals.
   */
  explicit MonomerFockSpace(int n_orb);

  int n_orb() const noexcept { return n_orb_; }
  int n_modes() const noexcept { return 2 * n_orb_; }
  Eigen::Index dim() const noexcept { return Eigen::Index{1} << n_modes(); }
  int mode(int spin, int orb) const noexcept { return spin * n_orb_ + orb; }

  /** @brief Creation operator of mode @p m. */
  const SparseOperator& creation(int m) const { return create_.at(m); }
  /** @brief Annihilation operator of mode @p m. */
  const SparseOperator& annihilation(int m) const { return annihilate_.at(m); }

  /** @brief E^s_pq = a+_{p s} a_{q s}. */
  const SparseOperator& excitation(int spin, int p, int q) const;
  /** @brief E^+_pq = E^a_pq + E^b_pq. */
  SparseOperator excitation_summed(int p, int q) const;
  /** @brief M^s_ab = (i/2) g_{a s,0} g_{b s,1}, a real symmetric matrix. */
  const SparseOperator& majorana_pair(int spin, int a, int b) const;
  /** @brief M^+_ab = M^a_ab + M^b_ab. */
  SparseOperator majorana_pair_summed(int a, int b) const;

  /** @brief Identity on this monomer. */
  SparseOperator identity() const;
  /** @brief Electron count of each basis state. */
  std::vector<int> electron_counts() const;
  /** @brief Twice S_z (n_alpha - n_beta) of each basis state. */
  std::vector<int> twice_sz() const;
  /** @brief Diagonal particle-number operator. */
  SparseOperator number_operator() const;

 private:
  int n_orb_;
  std::vector<SparseOperator> create_;
  std::vector<SparseOperator> annihilate_;
  std::vector<SparseOperator> excitation_;
  std::vector<SparseOperator> majorana_;
};

/**
 * @class DimerFockSpace
 * @brief Tensor product of two monomer spaces, monomer A major.
 *
 * Basis index = iA * dim(B) + iB, so operators on A and B combine through the
 * Kronecker product and commute exactly.
 */
class DimerFockSpace {
 public:
  /**
   * @throws OracleError if 2 (n_orb_A + n_orb_B) exceeds the cap.
   */
  DimerFockSpace(int n_orb_A, int n_orb_B);

  const MonomerFockSpace& A() const noexcept { return a_; }
  const MonomerFockSpace& B() const noexcept { return b_; }
  Eigen::Index dim() const noexcept { return a_.dim() * b_.dim(); }

  /** @brief Kronecker product op_A (x) op_B. */
  SparseOperator kron(const SparseOperator& op_a,
                      const SparseOperator& op_b) const;
  /** @brief op_A (x) identity. */
  SparseOperator lift_A(const SparseOperator& op_a) const;
  /** @brief identity (x) op_B. */
  SparseOperator lift_B(const SparseOperator& op_b) const;
  /** @brief Identity on the dimer. */
  SparseOperator identity() const;
  /** @brief Product state psi_A (x) psi_B. */
  Vector product_state(const Vector& psi_a, const Vector& psi_b) const;

 private:
  MonomerFockSpace a_;
  MonomerFockSpace b_;
};

/**
 * @brief Which excitation-operator form to build.
 *
 * kRealSymmetric replaces every monomer factor pair A (x) B of the
 * three-pair and two-pair exchange terms by sym(A) (x) sym(B) with
 * sym(X) = (X + X^T)/2. This projection leaves every expectation value in a
 * real product state unchanged and is the form the Majorana coefficients
 * reproduce as matrices. kHermitized keeps the literal "term + h.c." pairing.
 * Both forms are spin-conserving within each monomer.
 */
enum class ExcitationForm { kRealSymmetric, kHermitized };

/**
 * @brief Builds V, P or VP directly from excitation operators.
 * @throws DimensionError if VP is requested without the mixed blocks.
 */
SparseOperator excitation_operator(Observable observable,
                                   const DimerTensors& t,
                                   const DimerFockSpace& space,
                                   ExcitationForm form =
                                       ExcitationForm::kRealSymmetric);

/**
 * @brief The three dressed-tensor terms of VP without the product term.
 *
 * Used by the complete-basis check, where these terms vanish identically.
 */
SparseOperator vp_dressed_terms(const DimerTensors& t,
                                const DimerFockSpace& space,
                                ExcitationForm form);

/**
 * @brief Relative Frobenius residual ||VP - V P|| / ||V P|| of the literal
 * spatial-orbital electrostatic-exchange operator.
 *
 * VP is the dressed-term sum plus the product V P, so the residual is the
 * norm of the dressed terms relative to the product. It vanishes when both
 * orbital sets are complete in a shared span.
 */
double complete_basis_residual(const DimerTensors& t,
                               const DimerFockSpace& space);

/**
 * @brief Assembles the operator described by a coefficient set.
 * @throws DimensionError if the coefficient extents do not match the space.
 */
SparseOperator majorana_operator(const SaptCoefficients& coeffs,
                                 const DimerFockSpace& space);

/**
 * @brief Assembles one term of the electrostatic-exchange coefficient set.
 *
 * Component labels: "0", "A1", "B1", "A2", "B2", "1m", "1l", "2", "3", "4",
 * "1k". The "1k" term is zero unless the coefficient set carries that block.
 * @throws std::invalid_argument for an unknown label.
 */
SparseOperator majorana_component(const SaptCoefficients& vp,
                                  const std::string& component,
                                  const DimerFockSpace& space);

/** @brief All electrostatic-exchange component labels in assembly order. */
const std::vector<std::string>& vp_component_labels();

/**
 * @brief Monomer Hamiltonian sum h_pq E^+_pq + 1/2 sum (pq|rs)
 * (E^+_pq E^+_rs - delta_qr E^+_ps) + e0 from chemist-notation integrals.
 */
SparseOperator monomer_hamiltonian(const Matrix& h1, const Tensor4& eri,
                                   const MonomerFockSpace& space,
                                   double e0 = 0.0);

/** @brief Lowest eigenpair in a particle-number (and optional S_z) sector. */
struct GroundState {
  double energy = 0.0;
  double gap = 0.0;  ///< First excitation energy within the sector.
  Vector state;      ///< Normalized vector over the full monomer space.
};

/**
 * @brief Diagonalizes @p H in the sector with @p n_elec electrons.
 *
 * Degenerate ground spaces return the eigenvector reported first by the
 * symmetric eigensolver, with its largest-magnitude entry made positive.
 *
 * @throws OracleError if the sector is empty.
 */
GroundState ground_state(const SparseOperator& H, const MonomerFockSpace& space,
                         int n_elec, std::optional<int> twice_sz = std::nullopt);

/** @brief First-order energies of a product state. */
struct FirstOrderEnergy {
  double e_pol = 0.0;
  double e_exch = 0.0;
  double e_int = 0.0;
};

/**
 * @brief Evaluates <V>, <VP> - <V><P> and their sum for a normalized state.
 * @throws OracleError if the state norm deviates from 1 by more than 1e-10.
 */
FirstOrderEnergy first_order_energy(const Vector& psi, const SparseOperator& V,
                                    const SparseOperator& P,
                                    const SparseOperator& VP);

/** @brief <psi|op|psi>. */
double expectation(const SparseOperator& op, const Vector& psi);

/** @brief Largest |op - op^T| entry. */
double hermiticity_error(const SparseOperator& op);

/** @brief Largest |a - b| entry. */
double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

/** @brief Largest |entry| of an operator. */
double max_abs_entry(const SparseOperator& op);

/**
 * @brief Largest entry of the commutators of @p op with the number operators
 * of A and B.
 */
double number_commutator_error(const SparseOperator& op,
                               const DimerFockSpace& space);

/**
 * @brief Random real state over the given monomer sector.
 * @param seed Deterministic seed.
 */
Vector random_sector_state(const MonomerFockSpace& space, int n_elec,
                           std::optional<int> twice_sz, unsigned seed);

/**
 * @brief Embeds an active-space state into the full monomer space with the
 * listed core orbitals doubly occupied.
 *
 * Active orbital k of @p psi_active maps to spatial orbital active[k] with the
 * same spin. The core creation string is applied to the left of the active
 * string, which fixes the fermionic sign of every embedded basis state.
 *
 * @throws OracleError if the lists overlap, leave the range of @p full or do
 * not match the length of @p psi_active.
 */
Vector embed_frozen_core(const MonomerFockSpace& full,
                         const std::vector<int>& core,
                         const std::vector<int>& active,
                         const Vector& psi_active);

}  // namespace sapteve
