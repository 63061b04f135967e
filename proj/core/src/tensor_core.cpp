// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/tensor_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>

#include "majorana_accumulator.hpp"

namespace sapteve {

namespace {

Tensor4 symmetrize_axes01(const Tensor4& t) {
  if (t.dim(0) != t.dim(1)) {
    throw DimensionError("symmetrize: axes 0 and 1 differ in extent " +
                         dims_to_string(t.dims()));
  }
  Tensor4 r(t.dims());
  for (int a = 0; a < t.dim(0); ++a)
    for (int b = 0; b < t.dim(1); ++b)
      for (int c = 0; c < t.dim(2); ++c)
        for (int d = 0; d < t.dim(3); ++d)
          r(a, b, c, d) = 0.5 * (t(a, b, c, d) + t(b, a, c, d));
  return r;
}

Tensor4 symmetrize_axes23(const Tensor4& t) {
  if (t.dim(2) != t.dim(3)) {
    throw DimensionError("symmetrize: axes 2 and 3 differ in extent " +
                         dims_to_string(t.dims()));
  }
  Tensor4 r(t.dims());
  for (int a = 0; a < t.dim(0); ++a)
    for (int b = 0; b < t.dim(1); ++b)
      for (int c = 0; c < t.dim(2); ++c)
        for (int d = 0; d < t.dim(3); ++d)
          r(a, b, c, d) = 0.5 * (t(a, b, c, d) + t(a, b, d, c));
  return r;
}

void project_checked(Tensor4& t, const Tensor4& projected, double tol,
                     const std::string& name) {
  const double scale = std::max(1.0, t.max_abs());
  const double dev = max_abs_diff(t, projected);
  if (dev > tol * scale) {
    throw ContractViolation(fmt::format(
        "{}: asymmetry {:.3e} exceeds tolerance {:.1e}", name, dev,
        tol * scale));
  }
  t = projected;
}

Tensor4 exchange_product(const Matrix& S) {
  const int na = static_cast<int>(S.rows());
  const int nb = static_cast<int>(S.cols());
  Tensor4 X(na, na, nb, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < nb; ++d)
          X(a, b, c, d) = 0.5 * (S(a, d) * S(b, c) + S(b, d) * S(a, c));
  return X;
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Tensor4 pair_exchange_symmetric(const Tensor4& t) {
  Tensor4 s = symmetrize_pairs(t);
  Tensor4 r(s.dims());
  for (int a = 0; a < s.dim(0); ++a)
    for (int b = 0; b < s.dim(1); ++b)
      for (int c = 0; c < s.dim(2); ++c)
        for (int d = 0; d < s.dim(3); ++d)
          r(a, b, c, d) = 0.5 * (s(a, b, c, d) + s(c, d, a, b));
  return r;
}

}  // namespace

void DimerBasis::validate() const {
  if (n_orb_A < 1 || n_orb_B < 1) {
    throw DimensionError(fmt::format(
        "DimerBasis: orbital counts must be >= 1 (got {}, {})", n_orb_A,
        n_orb_B));
  }
  if (n_elec_A < 0 || n_elec_A > 2 * n_orb_A || n_elec_B < 0 ||
      n_elec_B > 2 * n_orb_B) {
    throw DimensionError(fmt::format(
        "DimerBasis: electron counts ({}, {}) outside [0, 2N]", n_elec_A,
        n_elec_B));
  }
  if (!orbitals_real) {
    throw DimensionError("DimerBasis: complex orbitals are not supported");
  }
}

void DimerTensors::validate() const {
  basis.validate();
  const int na = basis.n_orb_A;
  const int nb = basis.n_orb_B;
  require_dims(v, {na, na, nb, nb}, "v");
  require_shape(S, na, nb, "S");
  if (v_abba) require_dims(*v_abba, {na, nb, nb, na}, "v_abba");
  if (v_aaba) require_dims(*v_aaba, {na, na, nb, na}, "v_aaba");
  if (v_abbb) require_dims(*v_abbb, {na, nb, nb, nb}, "v_abbb");
}

void project_input_symmetries(DimerTensors& t, double tol) {
  t.validate();
  project_checked(t.v, symmetrize_pairs(t.v), tol, "v");
  if (t.v_aaba) project_checked(*t.v_aaba, symmetrize_axes01(*t.v_aaba), tol,
                                "v_aaba");
  if (t.v_abbb) project_checked(*t.v_abbb, symmetrize_axes23(*t.v_abbb), tol,
                                "v_abbb");
  if (t.S.size() > 0 && t.S.cwiseAbs().maxCoeff() > 1.0 + 1e-8) {
    throw ContractViolation(
        fmt::format("S: entry {:.6f} outside [-1, 1]",
                    t.S.cwiseAbs().maxCoeff()));
  }
}

std::string to_string(Observable o) {
  switch (o) {
    case Observable::kV:
      return "V";
    case Observable::kP:
      return "P";
    case Observable::kVP:
      return "VP";
  }
  return "?";
}

std::string to_string(SpaceTag s) {
  return s == SpaceTag::kFull ? "full" : "active";
}

Observable parse_observable(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  if (u == "V") return Observable::kV;
  if (u == "P") return Observable::kP;
  if (u == "VP" || u == "VPS") return Observable::kVP;
  throw std::invalid_argument("unknown observable '" + s + "'");
}

const Tensor4& SaptCoefficients::block(const std::string& label) const {
  auto it = two_body_blocks.find(label);
  if (it == two_body_blocks.end()) {
    throw std::out_of_range("SaptCoefficients: no block '" + label + "'");
  }
  return it->second;
}

Tensor4 symmetrize_pairs(const Tensor4& t) {
  return symmetrize_axes23(symmetrize_axes01(t));
}

SymmetrizedTensors symmetrize_tensors(const Tensor4& v, const Matrix& S) {
  require_dims(v, {static_cast<int>(S.rows()), static_cast<int>(S.rows()),
                   static_cast<int>(S.cols()), static_cast<int>(S.cols())},
               "v");
  return {symmetrize_pairs(v), exchange_product(S)};
}

double sym_vp2_element(const Tensor4& L2, const Matrix& S, int p1, int p2,
                       int p3, int p4, int q1, int q2) {
  return 0.25 * (L2(p1, p2, q1, p4) * S(p3, q2) + L2(p1, p2, q1, p3) * S(p4, q2) +
                 L2(p1, p2, q2, p4) * S(p3, q1) + L2(p1, p2, q2, p3) * S(p4, q1));
}

double sym_vp3_element(const Tensor4& L3, const Matrix& S, int p1, int p2,
                       int q1, int q2, int q3, int q4) {
  return 0.25 * (L3(p1, q4, q1, q2) * S(p2, q3) + L3(p2, q4, q1, q2) * S(p1, q3) +
                 L3(p1, q3, q1, q2) * S(p2, q4) + L3(p2, q3, q1, q2) * S(p1, q4));
}

DressedNu build_dressed_nu(const DimerTensors& t) {
  t.validate();
  if (!t.has_exchange_blocks()) {
    throw DimensionError(
        "build_dressed_nu: mixed blocks v_abba, v_aaba, v_abbb are required");
  }
  const int na = t.basis.n_orb_A;
  const int nb = t.basis.n_orb_B;
  const Tensor4& v = t.v;
  const Tensor4& vabba = *t.v_abba;
  const Tensor4& vaaba = *t.v_aaba;
  const Tensor4& vabbb = *t.v_abbb;
  const Matrix& S = t.S;

  // w[a][c][q][d] = sum_p v[a][p][c][q] S[p][d]
  Tensor4 w(na, nb, nb, nb);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nb; ++c)
      for (int q = 0; q < nb; ++q)
        for (int d = 0; d < nb; ++d) {
          double s = 0.0;
          for (int p = 0; p < na; ++p) s += v(a, p, c, q) * S(p, d);
          w(a, c, q, d) = s;
        }

  DressedNu nu;
  nu.nu_pqqp = Tensor4(na, na, nb, nb);
  nu.nu_bar_pqqp = Tensor4(na, na, nb, nb);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nb; ++c) {
      // Traces that multiply S[b][d] in the symmetrized variant.
      double tr_vss = 0.0;
      for (int q = 0; q < nb; ++q) tr_vss += w(a, c, q, q);
      double tr_abbb = 0.0;
      for (int q = 0; q < nb; ++q) tr_abbb += vabbb(a, q, c, q);
      double tr_aaba = 0.0;
      for (int p = 0; p < na; ++p) tr_aaba += vaaba(a, p, c, p);
      for (int b = 0; b < na; ++b)
        for (int d = 0; d < nb; ++d) {
          double vss = 0.0;
          double s_abbb = 0.0;
          for (int q = 0; q < nb; ++q) {
            vss += w(a, c, q, d) * S(b, q);
            s_abbb += vabbb(a, d, c, q) * S(b, q);
          }
          double s_aaba = 0.0;
          for (int p = 0; p < na; ++p) s_aaba += vaaba(a, p, c, b) * S(p, d);
          const double bare = vabba(a, d, c, b);
          nu.nu_pqqp(a, b, c, d) = bare + vss - s_abbb - s_aaba;
          nu.nu_bar_pqqp(a, b, c, d) =
              bare + 0.5 * (vss + tr_vss * S(b, d) - s_abbb -
                            tr_abbb * S(b, d) - s_aaba - tr_aaba * S(b, d));
        }
    }

  nu.nu_ppqp = Tensor4(na, na, nb, na);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < na; ++d) {
          double s = 0.0;
          for (int q = 0; q < nb; ++q) s += v(a, b, c, q) * S(d, q);
          nu.nu_ppqp(a, b, c, d) = vaaba(a, b, c, d) - s;
        }

  nu.nu_pqqq = Tensor4(na, nb, nb, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < nb; ++d) {
          double s = 0.0;
          for (int p = 0; p < na; ++p) s += v(a, p, c, d) * S(p, b);
          nu.nu_pqqq(a, b, c, d) = vabbb(a, b, c, d) - s;
        }
  return nu;
}

SaptCoefficients build_v_coefficients(const DimerTensors& t) {
  t.validate();
  const int na = t.basis.n_orb_A;
  const int nb = t.basis.n_orb_B;
  const Tensor4 v = symmetrize_pairs(t.v);
  SaptCoefficients out;
  out.observable = Observable::kV;
  out.space = SpaceTag::kFull;
  out.one_body_A = Matrix::Zero(na, na);
  out.one_body_B = Matrix::Zero(nb, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < nb; ++c) out.one_body_A(a, b) += v(a, b, c, c);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nb; ++c)
      for (int d = 0; d < nb; ++d) out.one_body_B(c, d) += v(a, a, c, d);
  out.constant = out.one_body_A.trace();
  out.two_body_blocks[kBlockV] = v;
  out.overlap = t.S;
  return out;
}

SaptCoefficients build_p_coefficients(const DimerTensors& t) {
  t.validate();
  const Matrix& S = t.S;
  SaptCoefficients out;
  out.observable = Observable::kP;
  out.space = SpaceTag::kFull;
  out.constant = -0.5 * S.squaredNorm();
  out.one_body_A = S * S.transpose();
  out.one_body_B = S.transpose() * S;
  out.two_body_blocks[kBlockExch] = exchange_product(S);
  out.overlap = S;
  return out;
}

namespace detail {

MajoranaAccumulator::MajoranaAccumulator(int n_a, int n_b)
    : na(n_a),
      nb(n_b),
      a1(Matrix::Zero(n_a, n_a)),
      b1(Matrix::Zero(n_b, n_b)),
      a2(n_a, n_a, n_a, n_a),
      b2(n_b, n_b, n_b, n_b),
      m(n_a, n_a, n_b, n_b),
      l(n_a, n_a, n_b, n_b),
      lam2(n_a, n_a, n_b, n_a),
      lam3(n_a, n_b, n_b, n_b) {}

MajoranaAccumulator MajoranaAccumulator::swapped() const {
  MajoranaAccumulator s(nb, na);
  s.c = c;
  s.a1 = b1;
  s.b1 = a1;
  s.a2 = b2;
  s.b2 = a2;
  s.m = m.permuted({2, 3, 0, 1});
  s.l = l.permuted({2, 3, 0, 1});
  s.lam2 = lam3.permuted({2, 3, 0, 1});
  s.lam3 = lam2.permuted({2, 3, 0, 1});
  return s;
}

void MajoranaAccumulator::add_swapped(const MajoranaAccumulator& s) {
  add(s.swapped());
}

void MajoranaAccumulator::add(const MajoranaAccumulator& o) {
  c += o.c;
  a1 += o.a1;
  b1 += o.b1;
  a2 += o.a2;
  b2 += o.b2;
  m += o.m;
  l += o.l;
  lam2 += o.lam2;
  lam3 += o.lam3;
}

SaptCoefficients MajoranaAccumulator::to_coefficients(
    SpaceTag space, const Tensor4& product_v,
    const PLikeTerms& product_p) const {
  SaptCoefficients out;
  out.observable = Observable::kVP;
  out.space = space;
  out.constant = c;
  out.one_body_A = -2.0 * symmetric_part(a1);
  out.one_body_B = -2.0 * symmetric_part(b1);
  out.two_body_blocks[kBlockA2] = -2.0 * pair_exchange_symmetric(a2);
  out.two_body_blocks[kBlockB2] = -2.0 * pair_exchange_symmetric(b2);
  out.two_body_blocks[kBlock1m] = -2.0 * symmetrize_pairs(m);
  out.two_body_blocks[kBlock1l] = -1.0 * symmetrize_pairs(l);
  out.two_body_blocks[kBlock2] = symmetrize_axes01(lam2);
  out.two_body_blocks[kBlock3] = symmetrize_axes23(lam3);
  out.two_body_blocks[kBlockV] = product_v;
  out.two_body_blocks[kBlockExch] = product_p.X;
  out.overlap = product_p.S;
  out.product_one_body_A = product_p.pA;
  out.product_one_body_B = product_p.pB;
  return out;
}

MajoranaAccumulator MajoranaAccumulator::from_coefficients(
    const SaptCoefficients& vp) {
  MajoranaAccumulator acc(vp.n_orb_A(), vp.n_orb_B());
  acc.c = vp.constant;
  acc.a1 = -0.5 * vp.one_body_A;
  acc.b1 = -0.5 * vp.one_body_B;
  acc.a2 = -0.5 * vp.block(kBlockA2);
  acc.b2 = -0.5 * vp.block(kBlockB2);
  acc.m = -0.5 * vp.block(kBlock1m);
  acc.l = -1.0 * vp.block(kBlock1l);
  acc.lam2 = vp.block(kBlock2);
  acc.lam3 = vp.block(kBlock3);
  return acc;
}

void accumulate_vp_product(const VLikeTerms& V, const PLikeTerms& P,
                           MajoranaAccumulator& acc) {
  const int na = acc.na;
  const int nb = acc.nb;
  const Matrix hpA = -0.5 * P.pA;
  const Matrix hpB = -0.5 * P.pB;
  acc.c += V.c * P.c;
  acc.a1 += V.c * hpA + P.c * V.fA;
  acc.b1 += V.c * hpB + P.c * V.fB;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < nb; ++d) {
          acc.l(a, b, c, d) -= V.c * P.X(a, b, c, d);
          acc.m(a, b, c, d) += P.c * V.v(a, b, c, d) + V.fA(a, b) * hpB(c, d) +
                               hpA(a, b) * V.fB(c, d);
        }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < na; ++c)
        for (int d = 0; d < na; ++d)
          acc.a2(a, b, c, d) +=
              0.5 * (V.fA(a, b) * hpA(c, d) + hpA(a, b) * V.fA(c, d));
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < nb; ++d)
          acc.b2(a, b, c, d) +=
              0.5 * (V.fB(a, b) * hpB(c, d) + hpB(a, b) * V.fB(c, d));
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int q = 0; q < nb; ++q)
        for (int d = 0; d < na; ++d)
          acc.lam2(a, b, q, d) += V.fA(a, b) * P.S(d, q);
  for (int p = 0; p < na; ++p)
    for (int q4 = 0; q4 < nb; ++q4)
      for (int c = 0; c < nb; ++c)
        for (int d = 0; d < nb; ++d)
          acc.lam3(p, q4, c, d) += V.fB(c, d) * P.S(p, q4);
}

VLikeTerms v_terms_from(const SaptCoefficients& V) {
  return {V.constant, V.one_body_A, V.one_body_B, V.block(kBlockV)};
}

PLikeTerms p_terms_from(const SaptCoefficients& P) {
  return {P.constant, P.one_body_A, P.one_body_B, P.overlap,
          P.block(kBlockExch)};
}

}  // namespace detail

SaptCoefficients build_vp_coefficients(const DimerTensors& t) {
  const DressedNu nu = build_dressed_nu(t);
  const int na = t.basis.n_orb_A;
  const int nb = t.basis.n_orb_B;
  const Matrix& S = t.S;
  detail::MajoranaAccumulator acc(na, nb);

  // Two-pair term -sum_s nu1 E^s F^s.
  const Tensor4 L = symmetrize_pairs(nu.nu_pqqp);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nb; ++c) acc.c -= 0.5 * L(a, a, c, c);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < nb; ++c) acc.a1(a, b) -= 0.5 * L(a, b, c, c);
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < nb; ++c)
      for (int d = 0; d < nb; ++d) acc.b1(c, d) -= 0.5 * L(a, a, c, d);
  acc.l -= L;

  // Three-pair term on monomer A.
  const Tensor4& n2 = nu.nu_ppqp;
  auto c2 = [&](int a, int b, int c, int d, int e, int f) {
    return n2(a, b, e, d) * S(c, f);
  };
  detail::accumulate_pp_sigma(c2, acc, -1.0);
  acc.lam2 += n2;

  // Three-pair term on monomer B, evaluated with the monomers exchanged.
  const Tensor4& n3 = nu.nu_pqqq;
  detail::MajoranaAccumulator swapped(nb, na);
  auto c3 = [&](int a, int b, int c, int d, int e, int f) {
    return n3(e, d, a, b) * S(f, c);
  };
  detail::accumulate_pp_sigma(c3, swapped, -1.0);
  acc.add_swapped(swapped);
  acc.lam3 += n3;

  const SaptCoefficients V = build_v_coefficients(t);
  const SaptCoefficients P = build_p_coefficients(t);
  const detail::VLikeTerms vt = detail::v_terms_from(V);
  const detail::PLikeTerms pt = detail::p_terms_from(P);
  detail::accumulate_vp_product(vt, pt, acc);
  return acc.to_coefficients(SpaceTag::kFull, vt.v, pt);
}

MajoranaCoefficientSet build_majorana_coefficients(const DimerTensors& t) {
  MajoranaCoefficientSet set;
  set.V = build_v_coefficients(t);
  set.P = build_p_coefficients(t);
  if (t.has_exchange_blocks()) set.VP = build_vp_coefficients(t);
  return set;
}

}  // namespace sapteve
