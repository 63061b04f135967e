// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/active_space.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "active_reduction.hpp"
#include "majorana_accumulator.hpp"

namespace sapteve {
namespace {

using detail::MajoranaAccumulator;
using detail::PLikeTerms;
using detail::VLikeTerms;

/**
 * @brief Orbital counts of the restricted basis, cores first.
 *
 * Monomer A keeps core orbitals at [0, cA) and active ones at [cA, cA + tA);
 * monomer B likewise.
 */
struct Split {
  int cA = 0;
  int tA = 0;
  int cB = 0;
  int tB = 0;

  Split swapped() const { return {cB, tB, cA, tA}; }
};

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Tensor4 slice(const Tensor4& t, int o0, int n0, int o1, int n1, int o2, int n2,
              int o3, int n3) {
  Tensor4 out(n0, n1, n2, n3);
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n2; ++c)
        for (int d = 0; d < n3; ++d)
          out(a, b, c, d) = t(o0 + a, o1 + b, o2 + c, o3 + d);
  return out;
}

/** @brief Pair (e, f) of B orbitals that survives the core projection. */
struct SurvivingPair {
  int e;
  int f;
  bool core;  ///< e == f is a core orbital.
};

std::vector<SurvivingPair> surviving_pairs(int n_core, int n_act) {
  std::vector<SurvivingPair> out;
  for (int j = 0; j < n_core; ++j) out.push_back({j, j, true});
  for (int e = 0; e < n_act; ++e)
    for (int f = 0; f < n_act; ++f)
      out.push_back({n_core + e, n_core + f, false});
  return out;
}

/** @brief Reduced slots c, m and l, which couple both monomers. */
void reduce_two_sided(const MajoranaAccumulator& full, const Split& s,
                      MajoranaAccumulator& act) {
  act.c += full.c;
  const Tensor4& m = full.m;
  const Tensor4& l = full.l;
  for (int i = 0; i < s.cA; ++i)
    for (int j = 0; j < s.cB; ++j) act.c += m(i, i, j, j) + 0.5 * l(i, i, j, j);
  for (int t = 0; t < s.tA; ++t)
    for (int u = 0; u < s.tA; ++u)
      for (int j = 0; j < s.cB; ++j)
        act.a1(t, u) +=
            m(s.cA + t, s.cA + u, j, j) + 0.5 * l(s.cA + t, s.cA + u, j, j);
  for (int t = 0; t < s.tB; ++t)
    for (int u = 0; u < s.tB; ++u)
      for (int i = 0; i < s.cA; ++i)
        act.b1(t, u) +=
            m(i, i, s.cB + t, s.cB + u) + 0.5 * l(i, i, s.cB + t, s.cB + u);
  act.m += slice(m, s.cA, s.tA, s.cA, s.tA, s.cB, s.tB, s.cB, s.tB);
  act.l += slice(l, s.cA, s.tA, s.cA, s.tA, s.cB, s.tB, s.cB, s.tB);
}

/**
 * @brief Reduced slots a1, a2 and the three-pair term on monomer A.
 *
 * The monomer-B counterparts are obtained by calling this with swapped
 * arguments and adding the result through MajoranaAccumulator::add_swapped.
 */
void reduce_one_side(const Matrix& a1, const Tensor4& a2, const Tensor4& lam2,
                     const Matrix& S, const Split& s,
                     MajoranaAccumulator& act) {
  const int nc = s.cA;
  const int nt = s.tA;
  const int o = nc;

  for (int i = 0; i < nc; ++i) act.c += a1(i, i);
  act.a1 += a1.block(o, o, nt, nt);

  // Anticommutator of two pair operators on A.
  Matrix w = Matrix::Zero(nt, nt);
  for (int i = 0; i < nc; ++i)
    for (int ip = 0; ip < nc; ++ip) act.c += a2(i, i, ip, ip);
  for (int t = 0; t < nt; ++t)
    for (int u = 0; u < nt; ++u)
      for (int i = 0; i < nc; ++i) {
        w(t, u) += a2(i, o + t, o + u, i);
        act.a1(t, u) += a2(i, i, o + t, o + u) + a2(o + t, o + u, i, i);
      }
  act.c += w.trace();
  act.a1 -= sym(w);
  act.a2 += slice(a2, o, nt, o, nt, o, nt, o, nt);

  // Three-pair term, one B pair (e, f) at a time.
  for (const SurvivingPair& p : surviving_pairs(s.cB, s.tB)) {
    auto G = [&](int a, int b, int c, int d) {
      return sym_vp2_element(lam2, S, a, b, c, d, p.e, p.f);
    };
    double alpha0 = 0.0;
    Matrix wg = Matrix::Zero(nt, nt);
    Matrix alpha1 = Matrix::Zero(nt, nt);
    Matrix beta1 = Matrix::Zero(nt, nt);
    for (int i = 0; i < nc; ++i)
      for (int ip = 0; ip < nc; ++ip) alpha0 += 0.5 * G(i, i, ip, ip);
    for (int t = 0; t < nt; ++t)
      for (int u = 0; u < nt; ++u)
        for (int i = 0; i < nc; ++i) {
          wg(t, u) += G(i, o + t, o + u, i);
          alpha1(t, u) += G(i, i, o + t, o + u);
          beta1(t, u) += 0.5 * G(o + t, o + u, i, i);
        }
    alpha0 += 0.5 * wg.trace();
    alpha1 -= sym(wg);
    if (p.core) {
      act.c -= alpha0;
      act.a1 -= 0.5 * alpha1 + beta1;
      for (int a = 0; a < nt; ++a)
        for (int b = 0; b < nt; ++b)
          for (int c = 0; c < nt; ++c)
            for (int d = 0; d < nt; ++d)
              act.a2(a, b, c, d) -= 0.5 * G(o + a, o + b, o + c, o + d);
    } else {
      const int e = p.e - s.cB;
      const int f = p.f - s.cB;
      act.b1(e, f) -= alpha0;
      for (int t = 0; t < nt; ++t)
        for (int u = 0; u < nt; ++u) {
          act.l(t, u, e, f) -= alpha1(t, u);
          act.m(t, u, e, f) -= beta1(t, u);
        }
    }
  }
  act.lam2 += slice(lam2, o, nt, o, nt, s.cB, s.tB, o, nt);
}

/**
 * @brief Contractions through a core hole on A inside 1/2{V', P'} from the
 * monomer-A one-body part and the two-pair part of P'.
 */
void reduce_product_one_side(const Tensor4& v, const Matrix& pp,
                             const Tensor4& X, const Matrix& S, const Split& s,
                             MajoranaAccumulator& act) {
  const int nc = s.cA;
  const int nt = s.tA;
  const int o = nc;
  const std::vector<SurvivingPair> pairs = surviving_pairs(s.cB, s.tB);

  // One-body part of P' on A.
  for (const SurvivingPair& p : pairs) {
    Matrix w = Matrix::Zero(nt, nt);
    for (int t = 0; t < nt; ++t)
      for (int u = 0; u < nt; ++u)
        for (int i = 0; i < nc; ++i)
          w(t, u) -= 0.5 * v(i, o + t, p.e, p.f) * pp(o + u, i);
    const Matrix ws = sym(w);
    if (p.core) {
      act.c += w.trace();
      act.a1 -= ws;
    } else {
      const int e = p.e - s.cB;
      const int f = p.f - s.cB;
      act.b1(e, f) += w.trace();
      for (int t = 0; t < nt; ++t)
        for (int u = 0; u < nt; ++u) act.m(t, u, e, f) -= ws(t, u);
    }
  }

  // Two-pair part of P' with the hole on A only.
  for (const SurvivingPair& cd : pairs)
    for (const SurvivingPair& ef : pairs) {
      Matrix w = Matrix::Zero(nt, nt);
      for (int t = 0; t < nt; ++t)
        for (int u = 0; u < nt; ++u)
          for (int i = 0; i < nc; ++i)
            w(t, u) += v(i, o + t, cd.e, cd.f) * X(o + u, i, ef.e, ef.f);
      const double tr = w.trace();
      const Matrix ws = sym(w);
      if (cd.core && ef.core) {
        act.c -= 0.5 * tr;
        act.a1 += 0.5 * ws;
      } else if (cd.core) {
        const int e = ef.e - s.cB;
        const int f = ef.f - s.cB;
        act.b1(e, f) -= 0.5 * tr;
        for (int t = 0; t < nt; ++t)
          for (int u = 0; u < nt; ++u) act.l(t, u, e, f) += ws(t, u);
      } else if (ef.core) {
        const int c = cd.e - s.cB;
        const int d = cd.f - s.cB;
        act.b1(c, d) -= 0.5 * tr;
        for (int t = 0; t < nt; ++t)
          for (int u = 0; u < nt; ++u) act.m(t, u, c, d) += 0.5 * ws(t, u);
      } else {
        act.b2(cd.e - s.cB, cd.f - s.cB, ef.e - s.cB, ef.f - s.cB) -= 0.5 * tr;
      }
    }
  const int mc = s.cB;
  for (int t = 0; t < nt; ++t)
    for (int g = 0; g < s.tB; ++g)
      for (int c = 0; c < s.tB; ++c)
        for (int d = 0; d < s.tB; ++d) {
          double x = 0.0;
          for (int i = 0; i < nc; ++i)
            x += v(i, o + t, mc + c, mc + d) * S(i, mc + g);
          act.lam3(t, g, c, d) -= x;
        }
}

/** @brief Contractions through core holes on both monomers at once. */
void reduce_product_two_sided(const Tensor4& v, const Tensor4& X,
                              const Split& s, MajoranaAccumulator& act) {
  const int nt = s.tA;
  const int mt = s.tB;
  const int oA = s.cA;
  const int oB = s.cB;
  Tensor4 w4(nt, nt, mt, mt);
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp)
      for (int u = 0; u < mt; ++u)
        for (int up = 0; up < mt; ++up) {
          double x = 0.0;
          for (int i = 0; i < s.cA; ++i)
            for (int j = 0; j < s.cB; ++j)
              x += v(i, oA + t, j, oB + u) * X(oA + tp, i, oB + up, j);
          w4(t, tp, u, up) = x;
        }
  Matrix wa = Matrix::Zero(nt, nt);
  Matrix wb = Matrix::Zero(mt, mt);
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp)
      for (int u = 0; u < mt; ++u) wa(t, tp) += w4(t, tp, u, u);
  for (int u = 0; u < mt; ++u)
    for (int up = 0; up < mt; ++up)
      for (int t = 0; t < nt; ++t) wb(u, up) += w4(t, t, u, up);
  act.c -= 0.5 * wa.trace();
  act.a1 += 0.5 * sym(wa);
  act.b1 += 0.5 * sym(wb);
  act.l -= symmetrize_pairs(w4);
}

/**
 * @brief Antisymmetric hopping coupling from a core hole on A inside the
 * commutator part of 1/2{V', P'}.
 *
 * The hole turns 1/2[M^+, M^s] on A into an antisymmetric one-body operator,
 * which multiplies the active commutator 1/2[N^+, N^s] on B.
 */
Tensor4 hopping_one_side(const Tensor4& v, const Tensor4& X, const Split& s) {
  const int nt = s.tA;
  const int mt = s.tB;
  const int oA = s.cA;
  const int oB = s.cB;
  // w(t, t'; c, d, e, f) restricted to active B indices, antisymmetrized in
  // (t, t').
  auto w_anti = [&](int t, int tp, int c, int d, int e, int f) {
    double x = 0.0;
    for (int i = 0; i < s.cA; ++i)
      x += v(i, oA + t, oB + c, oB + d) * X(oA + tp, i, oB + e, oB + f) -
           v(i, oA + tp, oB + c, oB + d) * X(oA + t, i, oB + e, oB + f);
    return 0.5 * x;
  };
  Tensor4 K(nt, nt, mt, mt);
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp)
      for (int u = 0; u < mt; ++u)
        for (int up = 0; up < mt; ++up) {
          double x = 0.0;
          for (int g = 0; g < mt; ++g)
            x += w_anti(t, tp, u, g, g, up) - w_anti(t, tp, g, up, u, g);
          K(t, tp, u, up) = -0.5 * x;
        }
  return K;
}

/** @brief Antisymmetric hopping coupling from core holes on both monomers. */
Tensor4 hopping_two_sided(const Tensor4& v, const Tensor4& X, const Split& s) {
  const int nt = s.tA;
  const int mt = s.tB;
  auto w4 = [&](int t, int tp, int u, int up) {
    double x = 0.0;
    for (int i = 0; i < s.cA; ++i)
      for (int j = 0; j < s.cB; ++j)
        x += v(i, s.cA + t, j, s.cB + u) * X(s.cA + tp, i, s.cB + up, j);
    return x;
  };
  Tensor4 K(nt, nt, mt, mt);
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp)
      for (int u = 0; u < mt; ++u)
        for (int up = 0; up < mt; ++up)
          K(t, tp, u, up) = -0.25 * (w4(t, tp, u, up) - w4(tp, t, u, up) -
                                     w4(t, tp, up, u) + w4(tp, t, up, u));
  return K;
}

VLikeTerms reduce_v_like(const Tensor4& v, const Split& s) {
  VLikeTerms r;
  r.fA = Matrix::Zero(s.tA, s.tA);
  r.fB = Matrix::Zero(s.tB, s.tB);
  for (int i = 0; i < s.cA; ++i)
    for (int j = 0; j < s.cB; ++j) r.c += v(i, i, j, j);
  for (int t = 0; t < s.tA; ++t)
    for (int u = 0; u < s.tA; ++u)
      for (int j = 0; j < s.cB; ++j) r.fA(t, u) += v(s.cA + t, s.cA + u, j, j);
  for (int t = 0; t < s.tB; ++t)
    for (int u = 0; u < s.tB; ++u)
      for (int i = 0; i < s.cA; ++i) r.fB(t, u) += v(i, i, s.cB + t, s.cB + u);
  r.v = slice(v, s.cA, s.tA, s.cA, s.tA, s.cB, s.tB, s.cB, s.tB);
  return r;
}

/** @brief Core projection of c - 1/2 pA.M^+ - 1/2 pB.N^+ - X.(M^s N^s). */
PLikeTerms reduce_p_like(double c, const Matrix& pA, const Matrix& pB,
                         const Matrix& S, const Tensor4& X, const Split& s) {
  PLikeTerms r;
  r.c = c;
  for (int i = 0; i < s.cA; ++i) r.c -= 0.5 * pA(i, i);
  for (int j = 0; j < s.cB; ++j) r.c -= 0.5 * pB(j, j);
  for (int i = 0; i < s.cA; ++i)
    for (int j = 0; j < s.cB; ++j) r.c -= 0.5 * X(i, i, j, j);
  r.pA = pA.block(s.cA, s.cA, s.tA, s.tA);
  r.pB = pB.block(s.cB, s.cB, s.tB, s.tB);
  for (int t = 0; t < s.tA; ++t)
    for (int u = 0; u < s.tA; ++u)
      for (int j = 0; j < s.cB; ++j) r.pA(t, u) += X(s.cA + t, s.cA + u, j, j);
  for (int t = 0; t < s.tB; ++t)
    for (int u = 0; u < s.tB; ++u)
      for (int i = 0; i < s.cA; ++i) r.pB(t, u) += X(i, i, s.cB + t, s.cB + u);
  r.S = S.block(s.cA, s.cB, s.tA, s.tB);
  r.X = slice(X, s.cA, s.tA, s.cA, s.tA, s.cB, s.tB, s.cB, s.tB);
  return r;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/** @brief Restricted tensors with cores first, plus the split. */
struct Restricted {
  DimerTensors t;
  Split split;
};

Restricted restrict_to_partition(const DimerTensors& t,
                                 const SpacePartition& part) {
  t.validate();
  part.validate(t.basis);
  Restricted r{restrict_orbitals(t, concat(part.core_A, part.active_A),
                                 concat(part.core_B, part.active_B)),
               {static_cast<int>(part.core_A.size()),
                static_cast<int>(part.active_A.size()),
                static_cast<int>(part.core_B.size()),
                static_cast<int>(part.active_B.size())}};
  return r;
}

void validate_monomer(const std::vector<int>& core,
                      const std::vector<int>& active, int n_orb, int n_elec,
                      char label) {
  std::set<int> seen;
  for (const std::vector<int>* list : {&core, &active})
    for (int p : *list) {
      if (p < 0 || p >= n_orb) {
        throw PartitionError(fmt::format(
            "SpacePartition: orbital {} of monomer {} outside [0, {})", p,
            label, n_orb));
      }
      if (!seen.insert(p).second) {
        throw PartitionError(fmt::format(
            "SpacePartition: orbital {} of monomer {} listed twice", p, label));
      }
    }
  const int n_act = n_elec - 2 * static_cast<int>(core.size());
  if (n_act < 0 || n_act > 2 * static_cast<int>(active.size())) {
    throw PartitionError(fmt::format(
        "SpacePartition: monomer {} has {} active electrons for {} active "
        "orbitals",
        label, n_act, active.size()));
  }
  if (core.empty() && active.empty()) {
    throw PartitionError(fmt::format(
        "SpacePartition: monomer {} keeps no orbitals", label));
  }
}

}  // namespace

int SpacePartition::active_electrons_A(const DimerBasis& basis) const {
  return basis.n_elec_A - 2 * static_cast<int>(core_A.size());
}

int SpacePartition::active_electrons_B(const DimerBasis& basis) const {
  return basis.n_elec_B - 2 * static_cast<int>(core_B.size());
}

void SpacePartition::validate(const DimerBasis& basis) const {
  validate_monomer(core_A, active_A, basis.n_orb_A, basis.n_elec_A, 'A');
  validate_monomer(core_B, active_B, basis.n_orb_B, basis.n_elec_B, 'B');
}

SpacePartition SpacePartition::all_active(const DimerBasis& basis) {
  SpacePartition p;
  for (int a = 0; a < basis.n_orb_A; ++a) p.active_A.push_back(a);
  for (int b = 0; b < basis.n_orb_B; ++b) p.active_B.push_back(b);
  return p;
}

DimerTensors restrict_orbitals(const DimerTensors& t,
                               const std::vector<int>& orbitals_A,
                               const std::vector<int>& orbitals_B) {
  t.validate();
  for (int p : orbitals_A)
    if (p < 0 || p >= t.basis.n_orb_A)
      throw DimensionError(
          fmt::format("restrict_orbitals: A orbital {} out of range", p));
  for (int q : orbitals_B)
    if (q < 0 || q >= t.basis.n_orb_B)
      throw DimensionError(
          fmt::format("restrict_orbitals: B orbital {} out of range", q));
  const auto& ia = orbitals_A;
  const auto& ib = orbitals_B;
  const int na = static_cast<int>(ia.size());
  const int nb = static_cast<int>(ib.size());
  auto pick = [](const Tensor4& x, const std::vector<int>& i0,
                 const std::vector<int>& i1, const std::vector<int>& i2,
                 const std::vector<int>& i3) {
    const int n0 = static_cast<int>(i0.size());
    const int n1 = static_cast<int>(i1.size());
    const int n2 = static_cast<int>(i2.size());
    const int n3 = static_cast<int>(i3.size());
    Tensor4 out(n0, n1, n2, n3);
    for (int a = 0; a < n0; ++a)
      for (int b = 0; b < n1; ++b)
        for (int c = 0; c < n2; ++c)
          for (int d = 0; d < n3; ++d)
            out(a, b, c, d) = x(i0[a], i1[b], i2[c], i3[d]);
    return out;
  };
  DimerTensors r;
  r.basis = t.basis;
  r.basis.n_orb_A = na;
  r.basis.n_orb_B = nb;
  r.v = pick(t.v, ia, ia, ib, ib);
  r.S = Matrix(na, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) r.S(a, b) = t.S(ia[a], ib[b]);
  if (t.v_abba) r.v_abba = pick(*t.v_abba, ia, ib, ib, ia);
  if (t.v_aaba) r.v_aaba = pick(*t.v_aaba, ia, ia, ib, ia);
  if (t.v_abbb) r.v_abbb = pick(*t.v_abbb, ia, ib, ib, ib);
  return r;
}

SaptCoefficients renormalize_electrostatic(const DimerTensors& t,
                                           const SpacePartition& part) {
  const Restricted r = restrict_to_partition(t, part);
  const Split& s = r.split;
  const VLikeTerms red = reduce_v_like(symmetrize_pairs(r.t.v), s);
  SaptCoefficients out;
  out.observable = Observable::kV;
  out.space = SpaceTag::kActive;
  out.overlap = r.t.S.block(s.cA, s.cB, s.tA, s.tB);

  if (s.tA == 0 || s.tB == 0) {
    // Nothing to absorb into: keep the projected Majorana terms as they are.
    const SaptCoefficients full = build_v_coefficients(r.t);
    double c = full.constant + red.c;
    for (int i = 0; i < s.cA; ++i) c += full.one_body_A(i, i);
    for (int j = 0; j < s.cB; ++j) c += full.one_body_B(j, j);
    out.constant = c;
    out.one_body_A = full.one_body_A.block(s.cA, s.cA, s.tA, s.tA) + red.fA;
    out.one_body_B = full.one_body_B.block(s.cB, s.cB, s.tB, s.tB) + red.fB;
    out.two_body_blocks[kBlockV] = red.v;
    return out;
  }

  const int eta_A = part.active_electrons_A(t.basis);
  const int eta_B = part.active_electrons_B(t.basis);
  if (eta_A == 0 || eta_B == 0) {
    throw PartitionError(fmt::format(
        "renormalize_electrostatic: active electron counts ({}, {}) must be "
        "positive to absorb the core terms",
        eta_A, eta_B));
  }
  // Excitation form: sum v E+ F+ projects to 4 c + 2 fA.E+ + 2 fB.F+ + v.E+F+.
  Tensor4 vt = red.v;
  for (int a = 0; a < s.tA; ++a)
    for (int b = 0; b < s.tA; ++b)
      for (int c = 0; c < s.tB; ++c)
        for (int d = 0; d < s.tB; ++d) {
          const double dab = a == b ? 1.0 : 0.0;
          const double dcd = c == d ? 1.0 : 0.0;
          vt(a, b, c, d) += 2.0 * red.fA(a, b) * dcd / eta_B +
                            2.0 * dab * red.fB(c, d) / eta_A +
                            4.0 * red.c * dab * dcd / (eta_A * eta_B);
        }
  out.one_body_A = Matrix::Zero(s.tA, s.tA);
  out.one_body_B = Matrix::Zero(s.tB, s.tB);
  for (int a = 0; a < s.tA; ++a)
    for (int b = 0; b < s.tA; ++b)
      for (int c = 0; c < s.tB; ++c) out.one_body_A(a, b) += vt(a, b, c, c);
  for (int a = 0; a < s.tA; ++a)
    for (int c = 0; c < s.tB; ++c)
      for (int d = 0; d < s.tB; ++d) out.one_body_B(c, d) += vt(a, a, c, d);
  out.constant = out.one_body_A.trace();
  out.two_body_blocks[kBlockV] = std::move(vt);
  return out;
}

SaptCoefficients renormalize_exchange(const DimerTensors& t,
                                      const SpacePartition& part) {
  const Restricted r = restrict_to_partition(t, part);
  const SaptCoefficients full = build_p_coefficients(r.t);
  const PLikeTerms red =
      reduce_p_like(full.constant, full.one_body_A, full.one_body_B,
                    full.overlap, full.block(kBlockExch), r.split);
  SaptCoefficients out;
  out.observable = Observable::kP;
  out.space = SpaceTag::kActive;
  out.constant = red.c;
  out.one_body_A = red.pA;
  out.one_body_B = red.pB;
  out.two_body_blocks[kBlockExch] = red.X;
  out.overlap = red.S;
  return out;
}

namespace detail {

SaptCoefficients reduce_vp_coefficients(const SaptCoefficients& vp, int core_A,
                                        int active_A, int core_B,
                                        int active_B) {
  const Split s{core_A, active_A, core_B, active_B};
  const MajoranaAccumulator full = MajoranaAccumulator::from_coefficients(vp);
  const Matrix& S = vp.overlap;
  const Matrix St = S.transpose();
  const Tensor4& v = vp.block(kBlockV);
  const Tensor4& X = vp.block(kBlockExch);
  const Tensor4 v_sw = v.permuted({2, 3, 0, 1});
  const Tensor4 X_sw = X.permuted({2, 3, 0, 1});

  MajoranaAccumulator act(s.tA, s.tB);
  MajoranaAccumulator act_sw(s.tB, s.tA);
  reduce_two_sided(full, s, act);
  reduce_one_side(full.a1, full.a2, full.lam2, S, s, act);
  reduce_one_side(full.b1, full.b2, full.lam3.permuted({2, 3, 0, 1}), St,
                  s.swapped(), act_sw);

  const VLikeTerms vr = reduce_v_like(v, s);
  const PLikeTerms pr =
      reduce_p_like(0.0, vp.product_one_body_A, vp.product_one_body_B, S, X, s);
  accumulate_vp_product(vr, pr, act);
  reduce_product_one_side(v, vp.product_one_body_A, X, S, s, act);
  reduce_product_one_side(v_sw, vp.product_one_body_B, X_sw, St, s.swapped(),
                          act_sw);
  reduce_product_two_sided(v, X, s, act);
  act.add_swapped(act_sw);
  SaptCoefficients out = act.to_coefficients(SpaceTag::kActive, vr.v, pr);
  if (s.cA > 0 || s.cB > 0) {
    Tensor4 K = hopping_one_side(v, X, s);
    K += hopping_one_side(v_sw, X_sw, s.swapped()).permuted({2, 3, 0, 1});
    K += hopping_two_sided(v, X, s);
    out.two_body_blocks[kBlock1k] = std::move(K);
  }
  return out;
}

}  // namespace detail

SaptCoefficients renormalize_vp(const DimerTensors& t,
                                const SpacePartition& part) {
  const Restricted r = restrict_to_partition(t, part);
  const Split& s = r.split;
  return detail::reduce_vp_coefficients(build_vp_coefficients(r.t), s.cA, s.tA,
                                        s.cB, s.tB);
}

MajoranaCoefficientSet build_active_coefficients(const DimerTensors& t,
                                                 const SpacePartition& part) {
  MajoranaCoefficientSet set;
  set.V = renormalize_electrostatic(t, part);
  set.P = renormalize_exchange(t, part);
  if (t.has_exchange_blocks()) set.VP = renormalize_vp(t, part);
  return set;
}

FrozenCoreHamiltonian frozen_core_hamiltonian(const Matrix& h1, const Tensor4& eri,
                                              const std::vector<int>& core,
                                              const std::vector<int>& active) {
  const int n = static_cast<int>(h1.rows());
  if (h1.cols() != n || eri.dims() != Tensor4::Dims{n, n, n, n})
    throw DimensionError("frozen_core_hamiltonian: h1 and eri extents disagree");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto* list : {&core, &active})
    for (int i : *list) {
      if (i < 0 || i >= n || used[static_cast<std::size_t>(i)])
        throw PartitionError(fmt::format("frozen_core_hamiltonian: invalid or repeated orbital {}", i));
      used[static_cast<std::size_t>(i)] = true;
    }
  FrozenCoreHamiltonian out;
  for (int c : core) {
    out.core_energy += 2.0 * h1(c, c);
    for (int d : core) out.core_energy += 2.0 * eri(c, c, d, d) - eri(c, d, d, c);
  }
  const int na = static_cast<int>(active.size());
  out.h1 = Matrix::Zero(na, na);
  out.eri = Tensor4(na, na, na, na);
  for (int t = 0; t < na; ++t)
    for (int u = 0; u < na; ++u) {
      const int p = active[static_cast<std::size_t>(t)];
      const int q = active[static_cast<std::size_t>(u)];
      double h = h1(p, q);
      for (int c : core) h += 2.0 * eri(p, q, c, c) - eri(p, c, c, q);
      out.h1(t, u) = h;
      for (int v = 0; v < na; ++v)
        for (int w = 0; w < na; ++w)
          out.eri(t, u, v, w) =
              eri(p, q, active[static_cast<std::size_t>(v)], active[static_cast<std::size_t>(w)]);
    }
  return out;
}

}  // namespace sapteve
