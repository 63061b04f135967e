// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "sapteve/tensor.hpp"

namespace sapteve {

/**
 * @brief Spatial-orbital dimensions and electron counts of a dimer.
 */
struct DimerBasis {
  int n_orb_A = 0;  ///< Spatial orbitals of monomer A.
  int n_orb_B = 0;  ///< Spatial orbitals of monomer B.
  int n_elec_A = 0;  ///< Electrons of monomer A.
  int n_elec_B = 0;  ///< Electrons of monomer B.
  bool orbitals_real = true;  ///< Only real orbitals are supported.

  /**
   * @brief Checks N >= 1, 0 <= electrons <= 2N and real orbitals.
   * @throws DimensionError on violation.
   */
  void validate() const;
};

/**
 * @brief Intermolecular integrals and overlaps of a dimer in the spatial
 * orbital basis.
 *
 * The integral v^{x1 x2}_{y1 y2} pairs (x1, x2) on the first electron and
 * (y1, y2) on the second. The electrostatic block uses A orbitals on the first
 * electron and B orbitals on the second. The three mixed blocks carry the
 * orbital patterns needed by the exchange-dressed tensors:
 *  - v_abba[p1][q2][q1][p2] = v^{p1 q2}_{q1 p2}
 *  - v_aaba[p1][p2][q1][p4] = v^{p1 p2}_{q1 p4}, symmetric in (p1, p2)
 *  - v_abbb[p1][q4][q1][q2] = v^{p1 q4}_{q1 q2}, symmetric in (q1, q2)
 *
 * The mixed blocks are optional. Without them the electrostatic and exchange
 * observables are available, but the electrostatic-exchange observable is not.
 */
struct DimerTensors {
  DimerBasis basis;
  Tensor4 v;  ///< v[p1][p2][q1][q2], four-fold symmetric.
  Matrix S;   ///< S[p][q], N_A x N_B overlap.
  std::optional<Tensor4> v_abba;
  std::optional<Tensor4> v_aaba;
  std::optional<Tensor4> v_abbb;

  /** @brief True when all three mixed blocks are present. */
  bool has_exchange_blocks() const {
    return v_abba.has_value() && v_aaba.has_value() && v_abbb.has_value();
  }

  /**
   * @brief Checks every array against the basis extents.
   * @throws DimensionError on mismatch.
   */
  void validate() const;
};

/**
 * @brief Projects the pair symmetries of every tensor in place.
 *
 * Deviations from the declared symmetry up to @p tol times max(1, max|x|) are
 * silently removed; larger deviations are rejected. Overlap entries must lie
 * in [-1, 1] up to 1e-8.
 *
 * @throws ContractViolation if an asymmetry exceeds the tolerance.
 * @throws DimensionError on shape mismatch.
 */
void project_input_symmetries(DimerTensors& t, double tol = 1e-10);

/** @brief Observable selector. */
enum class Observable { kV, kP, kVP };

/** @brief Full orbital space or core-traced active space. */
enum class SpaceTag { kFull, kActive };

/** @brief Short label "V", "P" or "VP". */
std::string to_string(Observable o);
/** @brief Short label "full" or "active". */
std::string to_string(SpaceTag s);
/**
 * @brief Parses "V", "P" or "VP" (case-insensitive).
 * @throws std::invalid_argument for other strings.
 */
Observable parse_observable(const std::string& s);

/** @name Two-body block labels */
///@{
inline constexpr const char* kBlockA2 = "A2";
inline constexpr const char* kBlockB2 = "B2";
inline constexpr const char* kBlock1m = "1m";
inline constexpr const char* kBlock1l = "1l";
inline constexpr const char* kBlock2 = "2";
inline constexpr const char* kBlock3 = "3";
inline constexpr const char* kBlockV = "v";
inline constexpr const char* kBlockExch = "exch";
inline constexpr const char* kBlock1k = "1k";
///@}

/**
 * @class SaptCoefficients
 * @brief Majorana-representation coefficients of one observable.
 *
 * With M^s_ab = (i/2) g_{a s,0} g_{b s,1} on monomer A, N^s_cd likewise on
 * monomer B, and M^+ = M^a + M^b, the assembled operators are
 *
 *  - V  = c + f^A.M^+ + f^B.N^+ + v.(M^+ N^+)
 *  - P  = c - 1/2 p^A.M^+ - 1/2 p^B.N^+ - sum_s X.(M^s N^s)
 *  - VP = c - 1/2 k^A.M^+ - 1/2 k^B.N^+
 *         - 1/2 L_A2.(M^+ M^+) - 1/2 L_B2.(N^+ N^+)
 *         - 1/2 L_1m.(M^+ N^+) - sum_s L_1l.(M^s N^s)
 *         - sum_s W2(ab,cd,ef) 1/2{M^+_ab, M^s_cd} N^s_ef
 *         - sum_s W3(ab,cd,ef) M^s_ab 1/2{N^+_cd, N^s_ef}
 *         + 1/2{V', P'}
 *         [+ sum_s K.(E^s F^s)]
 *
 * where W2 = sym(L2[a][b][e][d] S[c][f]) averages the swaps c<->d and e<->f,
 * W3 = sym(L3[a][f][c][d] S[b][e]) averages a<->b and e<->f,
 * V' = v.(M^+ N^+) and P' = -1/2 pp^A.M^+ - 1/2 pp^B.N^+ - sum_s X.(M^s N^s)
 * with pp the product one-body arrays.
 *
 * The bracketed term appears only in active-space VP. It couples the
 * antisymmetric hopping operators E^s_ab - E^s_ba of both monomers through a
 * tensor K that is antisymmetric in each pair, and it arises when a core
 * orbital is contracted inside the non-commuting part of 1/2{V', P'}. It
 * vanishes on real product states but not on entangled ones.
 *
 * Block extents:
 *  - A2 [NA]^4, B2 [NB]^4 (pair-symmetric and pair-exchange symmetric)
 *  - 1m, 1l, v, exch [NA][NA][NB][NB] (pair-symmetric)
 *  - 2 [NA][NA][NB][NA] (symmetric in the first pair), multiplied by S
 *  - 3 [NA][NB][NB][NB] (symmetric in the last pair), multiplied by S
 *  - 1k [NA][NA][NB][NB] (antisymmetric in each pair), active VP only
 */
struct SaptCoefficients {
  Observable observable = Observable::kV;
  SpaceTag space = SpaceTag::kFull;
  double constant = 0.0;
  Matrix one_body_A;
  Matrix one_body_B;
  std::map<std::string, Tensor4> two_body_blocks;
  Matrix overlap;  ///< Overlap used by blocks 2 and 3 and by P'.
  Matrix product_one_body_A;  ///< One-body part of P' (VP only).
  Matrix product_one_body_B;  ///< One-body part of P' (VP only).

  /** @brief Orbital count of monomer A. */
  int n_orb_A() const { return static_cast<int>(one_body_A.rows()); }
  /** @brief Orbital count of monomer B. */
  int n_orb_B() const { return static_cast<int>(one_body_B.rows()); }

  /**
   * @brief Returns a block by label.
   * @throws std::out_of_range if the block is absent.
   */
  const Tensor4& block(const std::string& label) const;

  /** @brief True when the block is present. */
  bool has_block(const std::string& label) const {
    return two_body_blocks.count(label) != 0;
  }
};

/** @brief The three first-order observables of one dimer. */
struct MajoranaCoefficientSet {
  SaptCoefficients V;
  SaptCoefficients P;
  std::optional<SaptCoefficients> VP;  ///< Absent without mixed blocks.
};

/**
 * @brief Symmetrized tensor products shared by the observables.
 */
struct SymmetrizedTensors {
  Tensor4 v;         ///< sym(v), averaged over p1<->p2 and q1<->q2.
  Tensor4 exchange;  ///< X = sym(S[p1][q2] S[p2][q1]).
};

/**
 * @brief Averages a rank-4 tensor over swaps of axes (0,1) and of axes (2,3).
 * @throws DimensionError if the paired extents differ.
 */
Tensor4 symmetrize_pairs(const Tensor4& t);

/**
 * @brief Returns sym(v) and sym(S S).
 * @throws DimensionError on shape mismatch.
 */
SymmetrizedTensors symmetrize_tensors(const Tensor4& v, const Matrix& S);

/**
 * @brief Element of sym(L2[p1][p2][q1][p4] S[p3][q2]) for the three-operator
 * term E^+_{p1p2} E^s_{p3p4} F^s_{q1q2}.
 *
 * Averages the swaps p3<->p4 and q1<->q2 (L2 is already symmetric in p1, p2).
 */
double sym_vp2_element(const Tensor4& L2, const Matrix& S, int p1, int p2,
                       int p3, int p4, int q1, int q2);

/**
 * @brief Element of sym(L3[p1][q4][q1][q2] S[p2][q3]) for the three-operator
 * term E^s_{p1p2} F^+_{q1q2} F^s_{q3q4}.
 *
 * Averages the swaps p1<->p2 and q3<->q4 (L3 is already symmetric in q1, q2).
 */
double sym_vp3_element(const Tensor4& L3, const Matrix& S, int p1, int p2,
                       int q1, int q2, int q3, int q4);

/**
 * @brief Exchange-dressed intermolecular tensors.
 *
 * Each tensor is stored in the index layout of the excitation operators it
 * multiplies:
 *  - nu_pqqp[p1][p2][q1][q2] multiplies E^s_{p1p2} F^s_{q1q2}
 *  - nu_ppqp[p1][p2][q1][p4] multiplies E^+_{p1p2} E^s_{p3p4} F^s_{q1q2}
 *  - nu_pqqq[p1][q4][q1][q2] multiplies E^s_{p1p2} F^+_{q1q2} F^s_{q3q4}
 *  - nu_bar_pqqp has the layout of nu_pqqp and adds the half-weighted
 *    contractions of the symmetrized real-orbital form.
 */
struct DressedNu {
  Tensor4 nu_pqqp;
  Tensor4 nu_ppqp;
  Tensor4 nu_pqqq;
  Tensor4 nu_bar_pqqp;
};

/**
 * @brief Builds all dressed tensors with contractions over the full ranges.
 * @throws DimensionError if the mixed blocks are absent or misshapen.
 */
DressedNu build_dressed_nu(const DimerTensors& t);

/** @brief Electrostatic coefficients. */
SaptCoefficients build_v_coefficients(const DimerTensors& t);

/** @brief Exchange coefficients. */
SaptCoefficients build_p_coefficients(const DimerTensors& t);

/**
 * @brief Electrostatic-exchange coefficients.
 * @throws DimensionError if the mixed blocks are absent.
 */
SaptCoefficients build_vp_coefficients(const DimerTensors& t);

/**
 * @brief Builds V, P and (when the mixed blocks exist) VP coefficients.
 */
MajoranaCoefficientSet build_majorana_coefficients(const DimerTensors& t);

}  // namespace sapteve
