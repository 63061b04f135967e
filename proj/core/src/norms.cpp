// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/norms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace sapteve {
namespace {

void finalize(NormReport& r) {
  r.total = 0.0;
  for (const auto& [label, value] : r.components) r.total += value;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double sparse_side(const Matrix& kappa, const Tensor4& lambda) {
  return 0.5 * l1_norm(kappa) + sparse_intra_norm(lambda);
}

}  // namespace

std::string to_string(Representation r) {
  return r == Representation::kSparse ? "sparse" : "tf";
}

Representation parse_representation(const std::string& s) {
  const std::string l = lower(s);
  if (l == "sparse") return Representation::kSparse;
  if (l == "tf" || l == "tensor_factorized") return Representation::kTensorFactorized;
  throw std::invalid_argument(fmt::format("unknown representation '{}'", s));
}

double NormReport::component(const std::string& label) const {
  auto it = components.find(label);
  return it == components.end() ? 0.0 : it->second;
}

double NormReport::total_without_three_pair() const {
  return total - component(kNormVP2) - component(kNormVP3);
}

double sparse_exchange_norm(const Matrix& pA, const Matrix& pB, const Matrix& S) {
  const double s1 = l1_norm(S);
  return 0.5 * l1_norm(pA) + 0.5 * l1_norm(pB) + 0.5 * s1 * s1;
}

double tf_exchange_norm(const SpectralDecomposition& pA,
                        const SpectralDecomposition& pB, const OverlapSvd& S) {
  const double ls = S.lambda_s();
  return 0.5 * pA.l1() + 0.5 * pB.l1() + 0.5 * ls * ls;
}

double sparse_intra_norm(const Tensor4& L) {
  const int n = L.dim(0);
  double anti = 0.0;
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < p1; ++p2)
      for (int p3 = 0; p3 < n; ++p3)
        for (int p4 = 0; p4 < p3; ++p4)
          anti += std::abs(L(p1, p2, p3, p4) - L(p1, p4, p3, p2));
  return 0.5 * anti + 0.25 * L.l1_norm();
}

NormReport sparse_norms(const SaptCoefficients& c) {
  NormReport r;
  r.observable = c.observable;
  r.representation = Representation::kSparse;
  r.lambda_s = l1_norm(c.overlap);
  switch (c.observable) {
    case Observable::kV:
      r.components[kNormOneBodyA] = l1_norm(c.one_body_A);
      r.components[kNormOneBodyB] = l1_norm(c.one_body_B);
      r.components[kNormTwoBody] = c.block(kBlockV).l1_norm();
      break;
    case Observable::kP:
      r.components[kNormOneBodyA] = 0.5 * l1_norm(c.one_body_A);
      r.components[kNormOneBodyB] = 0.5 * l1_norm(c.one_body_B);
      r.components[kNormExchange] = 0.5 * r.lambda_s * r.lambda_s;
      break;
    case Observable::kVP: {
      r.components[kNormVPA] = sparse_side(c.one_body_A, c.block(kBlockA2));
      r.components[kNormVPB] = sparse_side(c.one_body_B, c.block(kBlockB2));
      r.components[kNormVP1m] = 0.5 * c.block(kBlock1m).l1_norm();
      r.components[kNormVP1l] = 0.5 * c.block(kBlock1l).l1_norm();
      r.components[kNormVP2] = 0.5 * c.block(kBlock2).l1_norm() * r.lambda_s;
      r.components[kNormVP3] = 0.5 * c.block(kBlock3).l1_norm() * r.lambda_s;
      r.components[kNormVP4] =
          sparse_exchange_norm(c.product_one_body_A, c.product_one_body_B,
                               c.overlap) *
          c.block(kBlockV).l1_norm();
      if (c.has_block(kBlock1k))
        r.components[kNormVP1k] = 0.5 * c.block(kBlock1k).l1_norm();
      break;
    }
  }
  finalize(r);
  return r;
}

NormReport tf_norms(const FactorizedOperator& f) {
  NormReport r;
  r.observable = f.observable;
  r.representation = Representation::kTensorFactorized;
  r.lambda_s = f.overlap ? f.overlap->lambda_s() : 0.0;
  auto need_overlap = [&]() -> const OverlapSvd& {
    if (!f.overlap)
      throw std::out_of_range(fmt::format(
          "{} factors need an overlap decomposition", to_string(f.observable)));
    return *f.overlap;
  };
  switch (f.observable) {
    case Observable::kV:
      r.components[kNormOneBodyA] = f.one_body_A.l1();
      r.components[kNormOneBodyB] = f.one_body_B.l1();
      r.components[kNormTwoBody] = f.block(kBlockV).weighted_l1();
      break;
    case Observable::kP: {
      const double ls = need_overlap().lambda_s();
      r.components[kNormOneBodyA] = 0.5 * f.one_body_A.l1();
      r.components[kNormOneBodyB] = 0.5 * f.one_body_B.l1();
      r.components[kNormExchange] = 0.5 * ls * ls;
      break;
    }
    case Observable::kVP: {
      const OverlapSvd& S = need_overlap();
      if (!f.product_one_body_A || !f.product_one_body_B)
        throw std::out_of_range("VP factors need the product one-body spectra");
      r.components[kNormVPA] =
          0.5 * f.one_body_A.l1() + 0.25 * f.block(kBlockA2).square_l1();
      r.components[kNormVPB] =
          0.5 * f.one_body_B.l1() + 0.25 * f.block(kBlockB2).square_l1();
      r.components[kNormVP1m] = 0.5 * f.block(kBlock1m).weighted_l1();
      r.components[kNormVP1l] = 0.5 * f.block(kBlock1l).weighted_l1();
      r.components[kNormVP2] = 0.5 * S.lambda_s() * f.block(kBlock2).weighted_l1();
      r.components[kNormVP3] = 0.5 * S.lambda_s() * f.block(kBlock3).weighted_l1();
      r.components[kNormVP4] =
          tf_exchange_norm(*f.product_one_body_A, *f.product_one_body_B, S) *
          f.block(kBlockV).weighted_l1();
      if (f.has_block(kBlock1k))
        r.components[kNormVP1k] = 0.5 * f.block(kBlock1k).weighted_l1();
      break;
    }
  }
  finalize(r);
  return r;
}

std::vector<NormReport> all_norms(const MajoranaCoefficientSet& set,
                                  double truncation_threshold) {
  std::vector<NormReport> out;
  auto add = [&](const SaptCoefficients& c) {
    out.push_back(sparse_norms(c));
    out.push_back(tf_norms(truncate(factorize(c), truncation_threshold)));
  };
  add(set.V);
  add(set.P);
  if (set.VP) add(*set.VP);
  return out;
}

HamiltonianFactors factorize_hamiltonian(const Matrix& h1, const Tensor4& eri) {
  const int n = static_cast<int>(h1.rows());
  require_shape(h1, n, n, "h1");
  require_dims(eri, {n, n, n, n}, "eri");
  Matrix ht = h1;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        ht(p, q) += -0.5 * eri(p, r, r, q) + eri(p, q, r, r);
  HamiltonianFactors h;
  h.one_body = one_body_eigendecompose(2.0 * ht);
  h.two_body = factorize_block(kBlockA2, eri);
  return h;
}

double df_hamiltonian_norm(const SpectralDecomposition& one_body,
                           const BlockFactorization& two_body) {
  return 0.5 * one_body.l1() + 0.25 * two_body.square_l1();
}

}  // namespace sapteve
