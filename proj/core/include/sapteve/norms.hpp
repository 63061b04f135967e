// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "sapteve/factorization.hpp"
#include "sapteve/tensor_core.hpp"

namespace sapteve {

/** @brief Encoding whose l1 norm is reported. */
enum class Representation { kSparse, kTensorFactorized };

/** @brief "sparse" or "tf". */
std::string to_string(Representation r);

/**
 * @brief Parses "sparse" or "tf" (case-insensitive).
 * @throws std::invalid_argument for other strings.
 */
Representation parse_representation(const std::string& s);

/** @name Norm component labels */
///@{
inline constexpr const char* kNormOneBodyA = "one_body_A";
inline constexpr const char* kNormOneBodyB = "one_body_B";
inline constexpr const char* kNormTwoBody = "two_body";
inline constexpr const char* kNormExchange = "exchange";
inline constexpr const char* kNormVPA = "VP_A";
inline constexpr const char* kNormVPB = "VP_B";
inline constexpr const char* kNormVP1m = "VP_1m";
inline constexpr const char* kNormVP1l = "VP_1l";
inline constexpr const char* kNormVP2 = "VP_2";
inline constexpr const char* kNormVP3 = "VP_3";
inline constexpr const char* kNormVP4 = "VP_4";
inline constexpr const char* kNormVP1k = "VP_1k";
///@}

/**
 * @brief l1 norm of one observable in one representation.
 *
 * total is the sum of all components. VP_2 and VP_3 enter the total, and
 * total_without_three_pair() reports the value without them.
 */
struct NormReport {
  Observable observable = Observable::kV;
  Representation representation = Representation::kSparse;
  double total = 0.0;
  std::map<std::string, double> components;
  double lambda_s = 0.0;  ///< sum_n |s_n| of the overlap (sum |S| when sparse).

  /** @brief Component by label (0 when absent). */
  double component(const std::string& label) const;
  /** @brief total minus the VP_2 and VP_3 components. */
  double total_without_three_pair() const;
};

/**
 * @brief Sparse-encoding l1 norm of P-like terms
 * 1/2 sum|pA| + 1/2 sum|pB| + 1/2 (sum|S|)^2.
 */
double sparse_exchange_norm(const Matrix& pA, const Matrix& pB, const Matrix& S);

/**
 * @brief Factorized l1 norm of P-like terms
 * 1/2 sum|eig pA| + 1/2 sum|eig pB| + 1/2 lambda_s^2.
 */
double tf_exchange_norm(const SpectralDecomposition& pA,
                        const SpectralDecomposition& pB, const OverlapSvd& S);

/**
 * @brief Intra-monomer two-body sparse norm
 * 1/2 sum_{p1>p2, p3>p4} |L(p1,p2,p3,p4) - L(p1,p4,p3,p2)| + 1/4 sum |L|.
 */
double sparse_intra_norm(const Tensor4& lambda);

/**
 * @brief Entrywise l1 norms of one coefficient set.
 *
 * Components: V gives one_body_A, one_body_B, two_body. P gives one_body_A,
 * one_body_B, exchange. VP gives VP_A, VP_B, VP_1m, VP_1l, VP_2, VP_3, VP_4
 * and, when the block exists, VP_1k = 1/2 sum |K|.
 */
NormReport sparse_norms(const SaptCoefficients& coeffs);

/**
 * @brief Tensor-factorized l1 norms of one factorized operator.
 *
 * VP_A = 1/2 sum|eig kappa^A| + 1/4 sum_t |s_t| (sum_k |alpha_tk|)^2,
 * VP_1m and VP_1l = 1/2 sum_t |s_t| sum|left| sum|right|,
 * VP_2 and VP_3 = 1/2 lambda_s sum_t |s_t| sum|alpha| sum|beta|,
 * VP_4 = lambda_P(P') sum_t |s_t| sum|alpha^A| sum|alpha^B| over the v block,
 * VP_1k = 1/2 sum_t |s_t| sum|beta^A| sum|beta^B|.
 *
 * @throws std::out_of_range if a block the observable needs is missing.
 */
NormReport tf_norms(const FactorizedOperator& f);

/** @brief Sparse and factorized reports of every available observable. */
std::vector<NormReport> all_norms(const MajoranaCoefficientSet& set,
                                  double truncation_threshold = 0.0);

/**
 * @brief Double-factorized monomer Hamiltonian in the Majorana form.
 *
 * one_body holds the eigenvalues of 2 h~ with
 * h~_pq = h_pq - 1/2 sum_r (pr|rq) + sum_r (pq|rr); two_body is the
 * factorized (pq)x(rs) electron-repulsion tensor.
 */
struct HamiltonianFactors {
  SpectralDecomposition one_body;
  BlockFactorization two_body;
};

/**
 * @brief Factorizes a monomer Hamiltonian from chemist-notation integrals.
 * @throws DimensionError on shape mismatch.
 */
HamiltonianFactors factorize_hamiltonian(const Matrix& h1, const Tensor4& eri);

/**
 * @brief lambda_H = 1/2 sum_k |s_k| + 1/4 sum_t |s_t| (sum_k |alpha_tk|)^2.
 */
double df_hamiltonian_norm(const SpectralDecomposition& one_body,
                           const BlockFactorization& two_body);

/** @brief Convenience overload. */
inline double df_hamiltonian_norm(const HamiltonianFactors& h) {
  return df_hamiltonian_norm(h.one_body, h.two_body);
}

}  // namespace sapteve
