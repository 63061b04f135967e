// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include "sapteve/tensor_core.hpp"

namespace sapteve::detail {

/**
 * @brief Electrostatic-like operator c + fA.M^+ + fB.N^+ + v.(M^+ N^+).
 */
struct VLikeTerms {
  double c = 0.0;
  Matrix fA;
  Matrix fB;
  Tensor4 v;
};

/**
 * @brief Exchange-like operator c - 1/2 pA.M^+ - 1/2 pB.N^+ - sum_s X.(M^s N^s)
 * with X = sym(S S).
 */
struct PLikeTerms {
  double c = 0.0;
  Matrix pA;
  Matrix pB;
  Matrix S;
  Tensor4 X;
};

/**
 * @class MajoranaAccumulator
 * @brief Working form of the electrostatic-exchange coefficients.
 *
 * Fields are coefficients of plain Majorana pair operators:
 * c + a1.M^+ + b1.N^+ + a2.(M^+ M^+) + b2.(N^+ N^+) + m.(M^+ N^+)
 * + l.sum_s(M^s N^s) - W2 - W3 + 1/2{V', P'}, where the three-pair terms use
 * the product-form tensors lam2 and lam3 with the shared overlap S exactly as
 * documented on SaptCoefficients. The a2/b2 arrays are interpreted as
 * coefficients of the anticommutator 1/2{M^+_ab, M^+_cd}.
 */
struct MajoranaAccumulator {
  MajoranaAccumulator(int n_a, int n_b);

  int na;
  int nb;
  double c = 0.0;
  Matrix a1;
  Matrix b1;
  Tensor4 a2;
  Tensor4 b2;
  Tensor4 m;
  Tensor4 l;
  Tensor4 lam2;
  Tensor4 lam3;

  /** @brief Same operator with the roles of the monomers exchanged. */
  MajoranaAccumulator swapped() const;

  /** @brief Adds an accumulator expressed with the monomers exchanged. */
  void add_swapped(const MajoranaAccumulator& s);

  /** @brief Adds another accumulator of equal extents. */
  void add(const MajoranaAccumulator& o);

  /**
   * @brief Converts to the published normalization.
   * @param product_v two-body tensor of V'
   * @param product_p exchange-like P' (its constant is ignored)
   */
  SaptCoefficients to_coefficients(SpaceTag space, const Tensor4& product_v,
                                   const PLikeTerms& product_p) const;

  /** @brief Inverse of to_coefficients for the non-product slots. */
  static MajoranaAccumulator from_coefficients(const SaptCoefficients& vp);
};

/**
 * @brief Adds the non-product slots of 1/2{V, P} and returns nothing for
 * 1/2{V', P'}, which stays in product form.
 */
void accumulate_vp_product(const VLikeTerms& V, const PLikeTerms& P,
                           MajoranaAccumulator& acc);

/** @brief Reads the V-like terms of electrostatic coefficients. */
VLikeTerms v_terms_from(const SaptCoefficients& V);

/** @brief Reads the P-like terms of exchange coefficients. */
PLikeTerms p_terms_from(const SaptCoefficients& P);

/**
 * @brief Real-symmetric projection of sign * sum_s sum C(a,b,c,d,e,f)
 * E^+_ab E^s_cd F^s_ef into every slot except the three-pair slot.
 *
 * C must be symmetric in (a, b). The caller records the three-pair slot
 * through lam2.
 */
template <class Coef>
void accumulate_pp_sigma(const Coef& C, MajoranaAccumulator& acc,
                         double sign) {
  const int na = acc.na;
  const int nb = acc.nb;
  auto K = [&](int a, int b, int c, int d, int e, int f) {
    return 0.25 * (C(a, b, c, d, e, f) + C(a, b, d, c, e, f) +
                   C(a, b, c, d, f, e) + C(a, b, d, c, f, e));
  };
  auto Ka = [&](int a, int b, int c, int d, int e, int f) {
    return 0.25 * (C(a, b, c, d, e, f) - C(a, b, d, c, e, f) +
                   C(a, b, c, d, f, e) - C(a, b, d, c, f, e));
  };
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < na; ++c)
      for (int e = 0; e < nb; ++e) acc.c += sign * 0.5 * K(a, a, c, c, e, e);
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y) {
      double s1 = 0.0;
      double s2 = 0.0;
      for (int a = 0; a < na; ++a)
        for (int e = 0; e < nb; ++e) {
          s1 += K(a, a, x, y, e, e);
          s2 += K(x, y, a, a, e, e);
        }
      acc.a1(x, y) += sign * 0.5 * (s1 + s2);
    }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < na; ++c)
        for (int d = 0; d < na; ++d) {
          double s = 0.0;
          for (int e = 0; e < nb; ++e) s += K(a, b, c, d, e, e);
          acc.a2(a, b, c, d) += sign * 0.5 * s;
        }
  for (int e = 0; e < nb; ++e)
    for (int f = 0; f < nb; ++f) {
      double s = 0.0;
      for (int a = 0; a < na; ++a)
        for (int c = 0; c < na; ++c) s += K(a, a, c, c, e, f);
      acc.b1(e, f) += sign * 0.5 * s;
    }
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y)
      for (int e = 0; e < nb; ++e)
        for (int f = 0; f < nb; ++f) {
          double sl = 0.0;
          double sm = 0.0;
          double h = 0.0;
          for (int a = 0; a < na; ++a) {
            sl += K(a, a, x, y, e, f);
            sm += K(x, y, a, a, e, f);
            h += Ka(x, a, a, y, e, f) - Ka(a, y, x, a, e, f);
            h += Ka(y, a, a, x, e, f) - Ka(a, x, y, a, e, f);
          }
          acc.l(x, y, e, f) += sign * (sl + 0.25 * h);
          acc.m(x, y, e, f) += sign * 0.5 * sm;
        }
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y) {
      double h = 0.0;
      for (int e = 0; e < nb; ++e)
        for (int a = 0; a < na; ++a) {
          h += Ka(x, a, a, y, e, e) - Ka(a, y, x, a, e, e);
          h += Ka(y, a, a, x, e, e) - Ka(a, x, y, a, e, e);
        }
      acc.a1(x, y) += sign * 0.125 * h;
    }
}

}  // namespace sapteve::detail
