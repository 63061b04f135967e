// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace sapteve {
namespace {

constexpr double kSymmetryTol = 1e-10;

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw ContractViolation(fmt::format("{}: input contains NaN or Inf", what));
}

void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw ContractViolation(
        fmt::format("{}: symmetric branch needs a square matrix, got {}x{}",
                    what, m.rows(), m.cols()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale)
    throw ContractViolation(fmt::format(
        "{}: matrix declared symmetric but asymmetry is {:.3e}", what, asym));
}

/** @brief Flips @p v so its largest-magnitude entry (lowest index on ties)
 * is positive; returns the applied sign. */
double fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_abs) {
      best_abs = std::abs(v[i]);
      best = i;
    }
  }
  if (v.size() > 0 && v[best] < 0.0) {
    v = -v;
    return -1.0;
  }
  return 1.0;
}

/** @brief Raw factor list before ordering. */
struct RawFactors {
  Vector w;
  Matrix U;
  Matrix V;
};

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kRankCutoff) return true;
    if (a[i] > b[i] + kRankCutoff) return false;
  }
  return false;
}

/**
 * @brief Applies the sign convention, drops factors below the rank cutoff and
 * orders by descending magnitude with lexicographic tie breaking.
 */
RawFactors canonicalize(RawFactors raw, bool has_v) {
  const Eigen::Index n = raw.w.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double sign = fix_sign(raw.U.col(k));
    if (has_v) raw.V.col(k) *= sign;
  }
  const double wmax = n > 0 ? raw.w.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k)
    if (wmax > 0.0 && std::abs(raw.w[k]) > kRankCutoff * wmax) keep.push_back(k);
  std::stable_sort(keep.begin(), keep.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(raw.w[a]) > std::abs(raw.w[b]);
  });
  // Reorder each degenerate cluster by the sign-fixed vectors.
  const double tie = 1e-10 * wmax;
  for (std::size_t i = 0; i < keep.size();) {
    std::size_t j = i + 1;
    while (j < keep.size() &&
           std::abs(raw.w[keep[i]]) - std::abs(raw.w[keep[j]]) <= tie)
      ++j;
    std::stable_sort(keep.begin() + static_cast<std::ptrdiff_t>(i),
                     keep.begin() + static_cast<std::ptrdiff_t>(j),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return lex_less(raw.U.col(a), raw.U.col(b));
                     });
    i = j;
  }
  RawFactors out;
  const auto r = static_cast<Eigen::Index>(keep.size());
  out.w.resize(r);
  out.U.resize(raw.U.rows(), r);
  if (has_v) out.V.resize(raw.V.rows(), r);
  for (Eigen::Index k = 0; k < r; ++k) {
    out.w[k] = raw.w[keep[static_cast<std::size_t>(k)]];
    out.U.col(k) = raw.U.col(keep[static_cast<std::size_t>(k)]);
    if (has_v) out.V.col(k) = raw.V.col(keep[static_cast<std::size_t>(k)]);
  }
  return out;
}

RawFactors eigen_factors(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition did not converge");
  return canonicalize({es.eigenvalues(), es.eigenvectors(), Matrix()}, false);
}

RawFactors svd_factors(const Matrix& m) {
  if (m.size() == 0) return {Vector(0), Matrix(m.rows(), 0), Matrix(m.cols(), 0)};
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return canonicalize({svd.singularValues(), svd.matrixU(), svd.matrixV()},
                      true);
}

Matrix reshape_pair(const Vector& u, int rows, int cols) {
  return Eigen::Map<const RowMatrix>(u.data(), rows, cols);
}

Vector flatten_pair(const Matrix& m) {
  RowMatrix r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

/** @brief Drops the longest tail whose |weight| sum is at most
 * threshold * total; returns the kept count. */
Eigen::Index kept_count(const Vector& w, double threshold) {
  const Eigen::Index n = w.size();
  if (n == 0) return 0;
  const double total = w.cwiseAbs().sum();
  double tail = 0.0;
  Eigen::Index keep = n;
  while (keep > 1) {
    const double next = tail + std::abs(w[keep - 1]);
    if (next > threshold * total) break;
    tail = next;
    --keep;
  }
  return keep;
}

/** @brief Truncates an inner factor; returns the dropped |weight| sum. */
double truncate_inner(InnerFactor& f, double threshold) {
  const Eigen::Index keep = kept_count(f.weights, threshold);
  const double dropped = f.weights.tail(f.weights.size() - keep).cwiseAbs().sum();
  f.weights.conservativeResize(keep);
  f.U.conservativeResize(Eigen::NoChange, keep);
  if (!f.symmetric) f.V.conservativeResize(Eigen::NoChange, keep);
  return dropped;
}

std::array<int, 4> inverse_perm(const std::array<int, 4>& p) {
  std::array<int, 4> inv{};
  for (int i = 0; i < 4; ++i) inv[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = i;
  return inv;
}

}  // namespace

Matrix SpectralDecomposition::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

Matrix InnerFactor::reconstruct() const {
  if (symmetric) return U * weights.asDiagonal() * U.transpose();
  return U * weights.asDiagonal() * V.transpose();
}

Matrix OverlapSvd::reconstruct() const {
  return U * s.asDiagonal() * V.transpose();
}

FirstFactorization first_factorize(const Matrix& grouped, bool symmetric) {
  require_finite(grouped, "first_factorize");
  FirstFactorization f;
  f.symmetric = symmetric;
  RawFactors raw;
  if (symmetric) {
    require_symmetric(grouped, "first_factorize");
    raw = eigen_factors(grouped);
  } else {
    raw = svd_factors(grouped);
  }
  for (Eigen::Index k = 0; k < raw.w.size(); ++k) {
    f.s.push_back(raw.w[k]);
    f.u.push_back(raw.U.col(k));
    f.w.push_back(symmetric ? Vector(raw.U.col(k)) : Vector(raw.V.col(k)));
  }
  return f;
}

InnerFactor second_factorize(const Matrix& m, bool symmetric) {
  require_finite(m, "second_factorize");
  InnerFactor f;
  f.symmetric = symmetric;
  RawFactors raw;
  if (symmetric) {
    require_symmetric(m, "second_factorize");
    raw = eigen_factors(m);
  } else {
    raw = svd_factors(m);
  }
  f.weights = std::move(raw.w);
  f.U = std::move(raw.U);
  f.V = std::move(raw.V);
  return f;
}

OverlapSvd overlap_svd(const Matrix& S) {
  require_finite(S, "overlap_svd");
  RawFactors raw = svd_factors(S);
  return {std::move(raw.w), std::move(raw.U), std::move(raw.V)};
}

SpectralDecomposition one_body_eigendecompose(const Matrix& M) {
  require_finite(M, "one_body_eigendecompose");
  require_symmetric(M, "one_body_eigendecompose");
  if (M.size() == 0) return {Vector(0), Matrix(0, 0)};
  RawFactors raw = eigen_factors(M);
  return {std::move(raw.w), std::move(raw.U)};
}

BlockLayout block_layout(const std::string& label) {
  if (label == kBlockV || label == kBlock1m) return {{0, 1, 2, 3}, false, true, true};
  if (label == kBlockA2 || label == kBlockB2) return {{0, 1, 2, 3}, true, true, true};
  if (label == kBlock1l) return {{0, 2, 3, 1}, true, false, false};
  if (label == kBlock2) return {{0, 1, 3, 2}, false, true, false};
  if (label == kBlock3) return {{2, 3, 0, 1}, false, true, false};
  if (label == kBlock1k) return {{0, 1, 2, 3}, false, false, false};
  throw std::out_of_range(fmt::format("no factorization layout for block '{}'", label));
}

double BlockFactorization::weighted_l1() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += std::abs(t.s) * t.left.l1() * t.right.l1();
  return sum;
}

double BlockFactorization::square_l1() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += std::abs(t.s) * t.left.l1() * t.left.l1();
  return sum;
}

double BlockFactorization::outer_l1() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += std::abs(t.s);
  return sum;
}

BlockFactorization factorize_block(const std::string& label, const Tensor4& block) {
  BlockFactorization b;
  b.label = label;
  b.dims = block.dims();
  b.layout = block_layout(label);
  const Tensor4 p = block.permuted(b.layout.perm);
  const auto& d = p.dims();
  const FirstFactorization first = first_factorize(p.grouped(), b.layout.outer_symmetric);
  for (std::size_t t = 0; t < first.s.size(); ++t) {
    FactorTerm term;
    term.s = first.s[t];
    term.left = second_factorize(reshape_pair(first.u[t], d[0], d[1]),
                                 b.layout.left_symmetric);
    if (b.layout.outer_symmetric)
      term.right = term.left;
    else
      term.right = second_factorize(reshape_pair(first.w[t], d[2], d[3]),
                                    b.layout.right_symmetric);
    b.terms.push_back(std::move(term));
  }
  return b;
}

Tensor4 reconstruct(const BlockFactorization& b) {
  const auto& p = b.layout.perm;
  Tensor4::Dims pd{};
  for (std::size_t i = 0; i < 4; ++i)
    pd[static_cast<std::size_t>(p[i])] = b.dims[i];
  Matrix grouped = Matrix::Zero(static_cast<Eigen::Index>(pd[0]) * pd[1],
                                static_cast<Eigen::Index>(pd[2]) * pd[3]);
  for (const auto& t : b.terms) {
    const Vector u = flatten_pair(t.left.reconstruct());
    const Vector w = flatten_pair(t.right.reconstruct());
    grouped += t.s * u * w.transpose();
  }
  return Tensor4::from_grouped(grouped, pd).permuted(inverse_perm(p));
}

const BlockFactorization& FactorizedOperator::block(const std::string& label) const {
  auto it = blocks.find(label);
  if (it == blocks.end())
    throw std::out_of_range(fmt::format("factorized block '{}' is absent", label));
  return it->second;
}

FactorizedOperator factorize(const SaptCoefficients& coeffs) {
  FactorizedOperator f;
  f.observable = coeffs.observable;
  f.space = coeffs.space;
  f.constant = coeffs.constant;
  f.one_body_A = one_body_eigendecompose(coeffs.one_body_A);
  f.one_body_B = one_body_eigendecompose(coeffs.one_body_B);
  if (coeffs.observable == Observable::kVP) {
    f.product_one_body_A = one_body_eigendecompose(coeffs.product_one_body_A);
    f.product_one_body_B = one_body_eigendecompose(coeffs.product_one_body_B);
  }
  if (coeffs.overlap.size() > 0) f.overlap = overlap_svd(coeffs.overlap);
  for (const auto& [label, block] : coeffs.two_body_blocks) {
    if (label == kBlockExch) continue;
    f.blocks.emplace(label, factorize_block(label, block));
  }
  return f;
}

FactorizedOperator truncate(const FactorizedOperator& f, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0))
    throw std::invalid_argument(
        fmt::format("truncation threshold {} is outside [0, 1)", threshold));
  FactorizedOperator out = f;
  out.truncation_threshold = threshold;
  for (auto& [label, b] : out.blocks) {
    Vector s(static_cast<Eigen::Index>(b.terms.size()));
    for (std::size_t t = 0; t < b.terms.size(); ++t)
      s[static_cast<Eigen::Index>(t)] = b.terms[t].s;
    const auto keep = static_cast<std::size_t>(kept_count(s, threshold));
    double discarded = b.discarded_weight;
    for (std::size_t t = keep; t < b.terms.size(); ++t)
      discarded += std::abs(b.terms[t].s);
    b.terms.resize(keep);
    for (auto& t : b.terms) {
      // Unit-norm u_t and w_t: dropping inner weight d changes the term by at
      // most |s_t| d in Frobenius norm.
      const double dl = truncate_inner(t.left, threshold);
      double dr = 0.0;
      if (b.layout.outer_symmetric)
        t.right = t.left;
      else
        dr = truncate_inner(t.right, threshold);
      discarded += std::abs(t.s) * (dl + dr);
    }
    b.discarded_weight = discarded;
  }
  return out;
}

Tensor4 reconstruct(const FactorizedOperator& f, const std::string& label) {
  if (label == kBlockExch) {
    if (!f.overlap)
      throw std::out_of_range("exchange block needs an overlap factorization");
    const Matrix S = f.overlap->reconstruct();
    const int na = static_cast<int>(S.rows());
    const int nb = static_cast<int>(S.cols());
    Tensor4 x(na, na, nb, nb);
    for (int p1 = 0; p1 < na; ++p1)
      for (int p2 = 0; p2 < na; ++p2)
        for (int q1 = 0; q1 < nb; ++q1)
          for (int q2 = 0; q2 < nb; ++q2)
            x(p1, p2, q1, q2) = S(p1, q2) * S(p2, q1);
    return symmetrize_pairs(x);
  }
  return reconstruct(f.block(label));
}

}  // namespace sapteve
