// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapteve/tensor_core.hpp"

namespace sapteve {

/** @brief Relative cutoff below which eigenvalues and singular values count
 * as zero. */
inline constexpr double kRankCutoff = 1e-12;

/**
 * @brief Spectral decomposition M = sum_k values[k] vectors.col(k)
 * vectors.col(k)^T of a symmetric matrix.
 *
 * Values are ordered by descending magnitude and each vector has its
 * largest-magnitude entry positive.
 */
struct SpectralDecomposition {
  Vector values;
  Matrix vectors;

  /** @brief Sum of |values|. */
  double l1() const { return values.cwiseAbs().sum(); }
  /** @brief Reassembles the matrix. */
  Matrix reconstruct() const;
};

/**
 * @brief Second-step factor of one reshaped vector.
 *
 * The symmetric branch stores M = sum_k w_k U_k U_k^T (V is empty). The SVD
 * branch stores M = sum_k w_k U_k V_k^T with U on monomer-A rows and V on
 * monomer-B columns (or, for antisymmetric matrices, on the same monomer).
 */
struct InnerFactor {
  bool symmetric = true;
  Vector weights;  ///< alpha (symmetric branch) or beta (SVD branch).
  Matrix U;
  Matrix V;

  /** @brief Sum of |weights|. */
  double l1() const { return weights.cwiseAbs().sum(); }
  /** @brief Reassembles the reshaped matrix. */
  Matrix reconstruct() const;
};

/** @brief First-step factors M = sum_t s_t u_t w_t^T of a grouped matrix. */
struct FirstFactorization {
  bool symmetric = true;
  std::vector<double> s;
  std::vector<Vector> u;
  std::vector<Vector> w;  ///< Equal to u in the symmetric branch.
};

/**
 * @brief Eigendecomposition (symmetric) or SVD of a grouped matrix.
 *
 * Factors below kRankCutoff times the largest one are dropped. Factors are
 * sorted by descending |s|, ties broken by the lexicographic order of the
 * sign-fixed vectors.
 *
 * @throws ContractViolation if @p symmetric is set but the matrix is not
 * symmetric to 1e-10 (relative to max(1, max|M|)).
 */
FirstFactorization first_factorize(const Matrix& grouped, bool symmetric);

/**
 * @brief Eigendecomposition or SVD of one reshaped first-step vector.
 * @throws ContractViolation on NaN/Inf input or an asymmetric matrix in the
 * symmetric branch.
 */
InnerFactor second_factorize(const Matrix& m, bool symmetric);

/** @brief Thin SVD S = U diag(s) V^T of an overlap matrix. */
struct OverlapSvd {
  Vector s;  ///< Nonnegative singular values, descending.
  Matrix U;  ///< N_A x N_S.
  Matrix V;  ///< N_B x N_S.

  /** @brief lambda_s = sum_n |s_n|. */
  double lambda_s() const { return s.sum(); }
  /** @brief Reassembles S. */
  Matrix reconstruct() const;
};

/** @brief Thin SVD of @p S with the shared sign convention. */
OverlapSvd overlap_svd(const Matrix& S);

/**
 * @brief Spectral decomposition of a symmetric matrix.
 * @throws ContractViolation if M is not symmetric to 1e-10.
 */
SpectralDecomposition one_body_eigendecompose(const Matrix& M);

/**
 * @brief Index grouping of a rank-4 block.
 *
 * The block is first permuted so that r(x0, x1, x2, x3) =
 * T(x[perm[0]], x[perm[1]], x[perm[2]], x[perm[3]]); rows are (x0 x1) and
 * columns (x2 x3). Each first-step vector is reshaped into a matrix over its
 * index pair and factorized with the given branch.
 */
struct BlockLayout {
  std::array<int, 4> perm{0, 1, 2, 3};
  bool outer_symmetric = false;
  bool left_symmetric = true;
  bool right_symmetric = true;
};

/**
 * @brief Layout of a labeled coefficient block.
 * @throws std::out_of_range for an unknown label.
 */
BlockLayout block_layout(const std::string& label);

/** @brief One outer term s_t (left_t) (x) (right_t). */
struct FactorTerm {
  double s = 0.0;
  InnerFactor left;
  InnerFactor right;
};

/** @brief Two-step factorization of one labeled rank-4 block. */
struct BlockFactorization {
  std::string label;
  Tensor4::Dims dims{0, 0, 0, 0};  ///< Extents of the original block.
  BlockLayout layout;
  std::vector<FactorTerm> terms;
  double discarded_weight = 0.0;  ///< Bound recorded by truncate().

  /** @brief sum_t |s_t| (sum_k |left_k|) (sum_l |right_l|). */
  double weighted_l1() const;
  /** @brief sum_t |s_t| (sum_k |left_k|)^2, for complete-square blocks. */
  double square_l1() const;
  /** @brief sum_t |s_t|. */
  double outer_l1() const;
};

/** @brief Factorizes one block with its layout. */
BlockFactorization factorize_block(const std::string& label,
                                   const Tensor4& block);

/**
 * @class FactorizedOperator
 * @brief Tensor-factorized form of one observable's coefficient set.
 *
 * one_body_A/B hold f (V), p (P) or kappa (VP). product_one_body_A/B hold the
 * one-body part of P' for the product term of VP.
 */
struct FactorizedOperator {
  Observable observable = Observable::kV;
  SpaceTag space = SpaceTag::kFull;
  double constant = 0.0;
  SpectralDecomposition one_body_A;
  SpectralDecomposition one_body_B;
  std::optional<SpectralDecomposition> product_one_body_A;
  std::optional<SpectralDecomposition> product_one_body_B;
  std::optional<OverlapSvd> overlap;
  std::map<std::string, BlockFactorization> blocks;
  double truncation_threshold = 0.0;

  /** @brief Block by label.
   * @throws std::out_of_range if absent. */
  const BlockFactorization& block(const std::string& label) const;
  bool has_block(const std::string& label) const {
    return blocks.count(label) != 0;
  }
};

/**
 * @brief Factorizes every block of a coefficient set exactly.
 *
 * The exchange block of P and of the VP product term is represented through
 * the overlap SVD and is not factorized separately.
 */
FactorizedOperator factorize(const SaptCoefficients& coeffs);

/**
 * @brief Drops trailing factors whose cumulative |weight| is at most
 * @p threshold times the total, separately for the outer factors of each
 * block and for the inner factors of each term. At least one factor of every
 * nonzero list is kept.
 *
 * @throws std::invalid_argument unless 0 <= threshold < 1.
 */
FactorizedOperator truncate(const FactorizedOperator& f, double threshold);

/**
 * @brief Reassembles a block from its factors.
 *
 * "exch" is rebuilt from the overlap SVD as sym(S[p1][q2] S[p2][q1]).
 * @throws std::out_of_range for an unknown block label.
 */
Tensor4 reconstruct(const FactorizedOperator& f, const std::string& label);

/** @brief Reassembles a block factorization on its own. */
Tensor4 reconstruct(const BlockFactorization& b);

}  // namespace sapteve
