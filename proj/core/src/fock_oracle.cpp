// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <random>

namespace sapteve {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseOperator from_triplets(Eigen::Index dim, std::vector<Triplet>& t) {
  SparseOperator m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseOperator transpose(const SparseOperator& a) {
  SparseOperator t = a.transpose();
  return t;
}

SparseOperator sym(const SparseOperator& a) {
  SparseOperator s = 0.5 * (a + transpose(a));
  return s;
}

SparseOperator anticommutator_half(const SparseOperator& a,
                                   const SparseOperator& b) {
  SparseOperator r = 0.5 * (a * b + b * a);
  return r;
}

/**
 * @brief Collects Kronecker products as triplets and sums duplicates once.
 */
class KronAccumulator {
 public:
  explicit KronAccumulator(const DimerFockSpace& space) : space_(space) {}

  void add(const SparseOperator& a, const SparseOperator& b, double scale) {
    if (scale == 0.0) return;
    const Eigen::Index db = space_.B().dim();
    for (int ka = 0; ka < a.outerSize(); ++ka)
      for (SparseOperator::InnerIterator ia(a, ka); ia; ++ia) {
        const double va = ia.value() * scale;
        if (va == 0.0) continue;
        for (int kb = 0; kb < b.outerSize(); ++kb)
          for (SparseOperator::InnerIterator ib(b, kb); ib; ++ib) {
            triplets_.emplace_back(ia.row() * db + ib.row(),
                                   ia.col() * db + ib.col(),
                                   va * ib.value());
          }
      }
  }

  /** @brief Adds a monomer pair in the requested excitation form. */
  void add_pair(const SparseOperator& a, const SparseOperator& b, double scale,
                ExcitationForm form) {
    if (form == ExcitationForm::kRealSymmetric) {
      add(sym(a), sym(b), scale);
    } else {
      add(a, b, 0.5 * scale);
      add(transpose(a), transpose(b), 0.5 * scale);
    }
  }

  SparseOperator finish() { return from_triplets(space_.dim(), triplets_); }

 private:
  const DimerFockSpace& space_;
  std::vector<Triplet> triplets_;
};

SparseOperator zero_op(Eigen::Index dim) { return SparseOperator(dim, dim); }

void require_space(const SaptCoefficients& c, const DimerFockSpace& space) {
  if (c.n_orb_A() != space.A().n_orb() || c.n_orb_B() != space.B().n_orb()) {
    throw DimensionError(fmt::format(
        "coefficients for ({}, {}) orbitals do not match Fock space ({}, {})",
        c.n_orb_A(), c.n_orb_B(), space.A().n_orb(), space.B().n_orb()));
  }
}

/** @brief sum_ab w(a,b) op(a,b) over one monomer. */
template <class Weight, class OpFn>
SparseOperator weighted_sum(int n, Eigen::Index dim, const Weight& w,
                            const OpFn& op) {
  SparseOperator acc = zero_op(dim);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double x = w(a, b);
      if (x != 0.0) acc += x * op(a, b);
    }
  return acc;
}

SparseOperator exchange_pair_sum(const Tensor4& X, const DimerFockSpace& space,
                                 double scale) {
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  KronAccumulator acc(space);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < A.n_orb(); ++a)
      for (int b = 0; b < A.n_orb(); ++b) {
        SparseOperator rhs = weighted_sum(
            B.n_orb(), B.dim(), [&](int c, int d) { return X(a, b, c, d); },
            [&](int c, int d) -> const SparseOperator& {
              return B.majorana_pair(s, c, d);
            });
        acc.add(A.majorana_pair(s, a, b), rhs, scale);
      }
  return acc.finish();
}

SparseOperator summed_pair_product(const Tensor4& G,
                                   const DimerFockSpace& space, double scale) {
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  KronAccumulator acc(space);
  for (int a = 0; a < A.n_orb(); ++a)
    for (int b = 0; b < A.n_orb(); ++b) {
      SparseOperator rhs = weighted_sum(
          B.n_orb(), B.dim(), [&](int c, int d) { return G(a, b, c, d); },
          [&](int c, int d) { return B.majorana_pair_summed(c, d); });
      acc.add(A.majorana_pair_summed(a, b), rhs, scale);
    }
  return acc.finish();
}

SparseOperator v_like_operator(const SaptCoefficients& c,
                               const DimerFockSpace& space, bool with_const) {
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  SparseOperator op = summed_pair_product(c.block(kBlockV), space, 1.0);
  if (with_const) {
    op += space.lift_A(weighted_sum(
        A.n_orb(), A.dim(), [&](int a, int b) { return c.one_body_A(a, b); },
        [&](int a, int b) { return A.majorana_pair_summed(a, b); }));
    op += space.lift_B(weighted_sum(
        B.n_orb(), B.dim(), [&](int a, int b) { return c.one_body_B(a, b); },
        [&](int a, int b) { return B.majorana_pair_summed(a, b); }));
    op += c.constant * space.identity();
  }
  return op;
}

SparseOperator p_like_operator(double constant, const Matrix& pA,
                               const Matrix& pB, const Tensor4& X,
                               const DimerFockSpace& space) {
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  SparseOperator op = exchange_pair_sum(X, space, -1.0);
  op += space.lift_A(weighted_sum(
      A.n_orb(), A.dim(), [&](int a, int b) { return -0.5 * pA(a, b); },
      [&](int a, int b) { return A.majorana_pair_summed(a, b); }));
  op += space.lift_B(weighted_sum(
      B.n_orb(), B.dim(), [&](int a, int b) { return -0.5 * pB(a, b); },
      [&](int a, int b) { return B.majorana_pair_summed(a, b); }));
  if (constant != 0.0) op += constant * space.identity();
  return op;
}

}  // namespace

MonomerFockSpace::MonomerFockSpace(int n_orb) : n_orb_(n_orb) {
  if (n_orb < 1 || 2 * n_orb > kMaxDimerSpinOrbitals) {
    throw OracleError(fmt::format(
        "MonomerFockSpace: {} orbitals outside the supported range", n_orb));
  }
  const Eigen::Index d = dim();
  for (int m = 0; m < n_modes(); ++m) {
    std::vector<Triplet> t;
    const std::uint64_t bit = std::uint64_t{1} << m;
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(d); ++x) {
      if (x & bit) continue;
      const int parity = std::popcount(x & (bit - 1)) & 1;
      t.emplace_back(static_cast<Eigen::Index>(x | bit),
                     static_cast<Eigen::Index>(x), parity ? -1.0 : 1.0);
    }
    SparseOperator c = from_triplets(d, t);
    annihilate_.push_back(transpose(c));
    create_.push_back(std::move(c));
  }
  excitation_.resize(static_cast<std::size_t>(2 * n_orb_ * n_orb_));
  majorana_.resize(excitation_.size());
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < n_orb_; ++p)
      for (int q = 0; q < n_orb_; ++q) {
        const std::size_t k =
            static_cast<std::size_t>((s * n_orb_ + p) * n_orb_ + q);
        const SparseOperator& cp = create_[mode(s, p)];
        const SparseOperator& aq = annihilate_[mode(s, q)];
        const SparseOperator& ap = annihilate_[mode(s, p)];
        const SparseOperator& cq = create_[mode(s, q)];
        excitation_[k] = cp * aq;
        // (i/2) g0_p g1_q with g0 = a + a^+ and g1 = i (a^+ - a).
        SparseOperator mj =
            0.5 * (cp * aq) - 0.5 * (ap * cq) + 0.5 * (ap * aq) - 0.5 * (cp * cq);
        mj.prune(0.0);
        majorana_[k] = mj;
      }
}

const SparseOperator& MonomerFockSpace::excitation(int spin, int p,
                                                   int q) const {
  return excitation_.at(
      static_cast<std::size_t>((spin * n_orb_ + p) * n_orb_ + q));
}

SparseOperator MonomerFockSpace::excitation_summed(int p, int q) const {
  return excitation(0, p, q) + excitation(1, p, q);
}

const SparseOperator& MonomerFockSpace::majorana_pair(int spin, int a,
                                                      int b) const {
  return majorana_.at(
      static_cast<std::size_t>((spin * n_orb_ + a) * n_orb_ + b));
}

SparseOperator MonomerFockSpace::majorana_pair_summed(int a, int b) const {
  return majorana_pair(0, a, b) + majorana_pair(1, a, b);
}

SparseOperator MonomerFockSpace::identity() const {
  SparseOperator i(dim(), dim());
  i.setIdentity();
  return i;
}

std::vector<int> MonomerFockSpace::electron_counts() const {
  std::vector<int> n(static_cast<std::size_t>(dim()));
  for (std::uint64_t x = 0; x < n.size(); ++x) n[x] = std::popcount(x);
  return n;
}

std::vector<int> MonomerFockSpace::twice_sz() const {
  std::vector<int> n(static_cast<std::size_t>(dim()));
  const std::uint64_t alpha_mask = (std::uint64_t{1} << n_orb_) - 1;
  for (std::uint64_t x = 0; x < n.size(); ++x) {
    n[x] = std::popcount(x & alpha_mask) - std::popcount(x >> n_orb_);
  }
  return n;
}

SparseOperator MonomerFockSpace::number_operator() const {
  std::vector<Triplet> t;
  const std::vector<int> n = electron_counts();
  for (std::size_t x = 0; x < n.size(); ++x) {
    if (n[x] != 0) t.emplace_back(x, x, static_cast<double>(n[x]));
  }
  return from_triplets(dim(), t);
}

DimerFockSpace::DimerFockSpace(int n_orb_A, int n_orb_B)
    : a_((n_orb_A >= 1 && n_orb_B >= 1 &&
          2 * (n_orb_A + n_orb_B) <= kMaxDimerSpinOrbitals)
             ? n_orb_A
             : throw OracleError(fmt::format(
                   "DimerFockSpace: {} spin-orbitals exceed the cap of {}",
                   2 * (n_orb_A + n_orb_B), kMaxDimerSpinOrbitals))),
      b_(n_orb_B) {}

SparseOperator DimerFockSpace::kron(const SparseOperator& op_a,
                                    const SparseOperator& op_b) const {
  KronAccumulator acc(*this);
  acc.add(op_a, op_b, 1.0);
  return acc.finish();
}

SparseOperator DimerFockSpace::lift_A(const SparseOperator& op_a) const {
  return kron(op_a, b_.identity());
}

SparseOperator DimerFockSpace::lift_B(const SparseOperator& op_b) const {
  return kron(a_.identity(), op_b);
}

SparseOperator DimerFockSpace::identity() const {
  SparseOperator i(dim(), dim());
  i.setIdentity();
  return i;
}

Vector DimerFockSpace::product_state(const Vector& psi_a,
                                     const Vector& psi_b) const {
  if (psi_a.size() != a_.dim() || psi_b.size() != b_.dim()) {
    throw DimensionError("product_state: monomer state size mismatch");
  }
  Vector psi(dim());
  for (Eigen::Index i = 0; i < psi_a.size(); ++i) {
    psi.segment(i * psi_b.size(), psi_b.size()) = psi_a(i) * psi_b;
  }
  return psi;
}

SparseOperator excitation_operator(Observable observable,
                                   const DimerTensors& t,
                                   const DimerFockSpace& space,
                                   ExcitationForm form) {
  t.validate();
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  if (A.n_orb() != t.basis.n_orb_A || B.n_orb() != t.basis.n_orb_B) {
    throw DimensionError("excitation_operator: tensors do not match space");
  }
  const int na = A.n_orb();
  const int nb = B.n_orb();

  auto build_v = [&]() {
    KronAccumulator acc(space);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        SparseOperator rhs = weighted_sum(
            nb, B.dim(), [&](int c, int d) { return t.v(a, b, c, d); },
            [&](int c, int d) { return B.excitation_summed(c, d); });
        acc.add_pair(A.excitation_summed(a, b), rhs, 1.0, form);
      }
    return acc.finish();
  };
  auto build_p = [&]() {
    KronAccumulator acc(space);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
          SparseOperator rhs = weighted_sum(
              nb, B.dim(),
              [&](int c, int d) { return t.S(a, d) * t.S(b, c); },
              [&](int c, int d) -> const SparseOperator& {
                return B.excitation(s, c, d);
              });
          acc.add_pair(A.excitation(s, a, b), rhs, -1.0, form);
        }
    return acc.finish();
  };

  switch (observable) {
    case Observable::kV:
      return build_v();
    case Observable::kP:
      return build_p();
    case Observable::kVP: {
      SparseOperator V = build_v();
      SparseOperator P = build_p();
      SparseOperator op = vp_dressed_terms(t, space, form);
      op += anticommutator_half(V, P);
      return op;
    }
  }
  throw std::invalid_argument("excitation_operator: unknown observable");
}

SparseOperator vp_dressed_terms(const DimerTensors& t,
                                const DimerFockSpace& space,
                                ExcitationForm form) {
  const DressedNu nu = build_dressed_nu(t);
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  const int na = A.n_orb();
  const int nb = B.n_orb();
  const Matrix& S = t.S;
  KronAccumulator acc(space);
  for (int s = 0; s < 2; ++s) {
    auto EA = [&](int a, int b) -> const SparseOperator& {
      return A.excitation(s, a, b);
    };
    auto EB = [&](int a, int b) -> const SparseOperator& {
      return B.excitation(s, a, b);
    };
    // -nu1 E^s_ab F^s_cd
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        SparseOperator rhs = weighted_sum(
            nb, B.dim(), [&](int c, int d) { return nu.nu_pqqp(a, b, c, d); },
            EB);
        acc.add_pair(EA(a, b), rhs, -1.0, form);
      }
    // -nu2[p1][p2][q1][p4] S[p3][q2] E^+_{p1p2} E^s_{p3p4} F^s_{q1q2}
    for (int e = 0; e < nb; ++e)
      for (int f = 0; f < nb; ++f) {
        SparseOperator lhs = zero_op(A.dim());
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < na; ++b) {
            SparseOperator inner = weighted_sum(
                na, A.dim(),
                [&](int c, int d) { return nu.nu_ppqp(a, b, e, d) * S(c, f); },
                EA);
            if (inner.nonZeros() == 0) continue;
            lhs += A.excitation_summed(a, b) * inner;
          }
        acc.add_pair(lhs, EB(e, f), -1.0, form);
      }
    // -nu3[p1][q4][q1][q2] S[p2][q3] E^s_{p1p2} F^+_{q1q2} F^s_{q3q4}
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        SparseOperator rhs = zero_op(B.dim());
        for (int c = 0; c < nb; ++c)
          for (int d = 0; d < nb; ++d) {
            SparseOperator inner = weighted_sum(
                nb, B.dim(),
                [&](int e, int f) { return nu.nu_pqqq(a, f, c, d) * S(b, e); },
                EB);
            if (inner.nonZeros() == 0) continue;
            rhs += B.excitation_summed(c, d) * inner;
          }
        acc.add_pair(EA(a, b), rhs, -1.0, form);
      }
  }
  return acc.finish();
}

double complete_basis_residual(const DimerTensors& t,
                               const DimerFockSpace& space) {
  const auto form = ExcitationForm::kHermitized;
  const SparseOperator V = excitation_operator(Observable::kV, t, space, form);
  const SparseOperator P = excitation_operator(Observable::kP, t, space, form);
  const SparseOperator VP = V * P;
  const double denom = VP.norm();
  if (denom == 0.0) {
    throw OracleError("complete_basis_residual: V P vanishes");
  }
  return vp_dressed_terms(t, space, form).norm() / denom;
}

const std::vector<std::string>& vp_component_labels() {
  static const std::vector<std::string> labels{"0",  "A1", "B1", "A2", "B2",
                                               "1m", "1l", "2",  "3",  "4",
                                               "1k"};
  return labels;
}

SparseOperator majorana_component(const SaptCoefficients& vp,
                                  const std::string& component,
                                  const DimerFockSpace& space) {
  require_space(vp, space);
  const MonomerFockSpace& A = space.A();
  const MonomerFockSpace& B = space.B();
  const int na = A.n_orb();
  const int nb = B.n_orb();
  auto MA = [&](int a, int b) { return A.majorana_pair_summed(a, b); };
  auto MB = [&](int a, int b) { return B.majorana_pair_summed(a, b); };

  if (component == "0") return vp.constant * space.identity();
  if (component == "A1") {
    return space.lift_A(weighted_sum(
        na, A.dim(), [&](int a, int b) { return -0.5 * vp.one_body_A(a, b); },
        MA));
  }
  if (component == "B1") {
    return space.lift_B(weighted_sum(
        nb, B.dim(), [&](int a, int b) { return -0.5 * vp.one_body_B(a, b); },
        MB));
  }
  if (component == "A2" || component == "B2") {
    const bool on_a = component == "A2";
    const MonomerFockSpace& X = on_a ? A : B;
    const Tensor4& G = vp.block(on_a ? kBlockA2 : kBlockB2);
    auto M = [&](int a, int b) { return X.majorana_pair_summed(a, b); };
    SparseOperator op = zero_op(X.dim());
    for (int a = 0; a < X.n_orb(); ++a)
      for (int b = 0; b < X.n_orb(); ++b) {
        SparseOperator rhs = weighted_sum(
            X.n_orb(), X.dim(), [&](int c, int d) { return G(a, b, c, d); }, M);
        op += M(a, b) * rhs;
      }
    op *= -0.5;
    return on_a ? space.lift_A(op) : space.lift_B(op);
  }
  if (component == "1m") {
    return summed_pair_product(vp.block(kBlock1m), space, -0.5);
  }
  if (component == "1l") {
    return exchange_pair_sum(vp.block(kBlock1l), space, -1.0);
  }
  if (component == "2") {
    const Tensor4& L2 = vp.block(kBlock2);
    const Matrix& S = vp.overlap;
    KronAccumulator acc(space);
    for (int s = 0; s < 2; ++s)
      for (int e = 0; e < nb; ++e)
        for (int f = 0; f < nb; ++f) {
          SparseOperator lhs = zero_op(A.dim());
          for (int a = 0; a < na; ++a)
            for (int b = 0; b < na; ++b) {
              SparseOperator y = weighted_sum(
                  na, A.dim(),
                  [&](int c, int d) {
                    return sym_vp2_element(L2, S, a, b, c, d, e, f);
                  },
                  [&](int c, int d) -> const SparseOperator& {
                    return A.majorana_pair(s, c, d);
                  });
              if (y.nonZeros() == 0) continue;
              lhs += anticommutator_half(MA(a, b), y);
            }
          acc.add(lhs, B.majorana_pair(s, e, f), -1.0);
        }
    return acc.finish();
  }
  if (component == "3") {
    const Tensor4& L3 = vp.block(kBlock3);
    const Matrix& S = vp.overlap;
    KronAccumulator acc(space);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
          SparseOperator rhs = zero_op(B.dim());
          for (int c = 0; c < nb; ++c)
            for (int d = 0; d < nb; ++d) {
              SparseOperator y = weighted_sum(
                  nb, B.dim(),
                  [&](int e, int f) {
                    return sym_vp3_element(L3, S, a, b, c, d, e, f);
                  },
                  [&](int e, int f) -> const SparseOperator& {
                    return B.majorana_pair(s, e, f);
                  });
              if (y.nonZeros() == 0) continue;
              rhs += anticommutator_half(MB(c, d), y);
            }
          acc.add(A.majorana_pair(s, a, b), rhs, -1.0);
        }
    return acc.finish();
  }
  if (component == "4") {
    SparseOperator Vp = summed_pair_product(vp.block(kBlockV), space, 1.0);
    SparseOperator Pp =
        p_like_operator(0.0, vp.product_one_body_A, vp.product_one_body_B,
                        vp.block(kBlockExch), space);
    return anticommutator_half(Vp, Pp);
  }
  if (component == "1k") {
    if (!vp.has_block(kBlock1k)) return zero_op(space.dim());
    const Tensor4& K = vp.block(kBlock1k);
    KronAccumulator acc(space);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
          SparseOperator rhs = weighted_sum(
              nb, B.dim(), [&](int c, int d) { return K(a, b, c, d); },
              [&](int c, int d) -> const SparseOperator& {
                return B.excitation(s, c, d);
              });
          if (rhs.nonZeros() == 0) continue;
          acc.add(A.excitation(s, a, b), rhs, 1.0);
        }
    return acc.finish();
  }
  throw std::invalid_argument("majorana_component: unknown label '" +
                              component + "'");
}

SparseOperator majorana_operator(const SaptCoefficients& coeffs,
                                 const DimerFockSpace& space) {
  require_space(coeffs, space);
  switch (coeffs.observable) {
    case Observable::kV:
      return v_like_operator(coeffs, space, true);
    case Observable::kP:
      return p_like_operator(coeffs.constant, coeffs.one_body_A,
                             coeffs.one_body_B, coeffs.block(kBlockExch),
                             space);
    case Observable::kVP: {
      SparseOperator op = zero_op(space.dim());
      for (const std::string& label : vp_component_labels()) {
        op += majorana_component(coeffs, label, space);
      }
      return op;
    }
  }
  throw std::invalid_argument("majorana_operator: unknown observable");
}

SparseOperator monomer_hamiltonian(const Matrix& h1, const Tensor4& eri,
                                   const MonomerFockSpace& space, double e0) {
  const int n = space.n_orb();
  require_shape(h1, n, n, "h1");
  require_dims(eri, {n, n, n, n}, "eri");
  SparseOperator H = e0 * space.identity();
  std::vector<SparseOperator> E;
  E.reserve(static_cast<std::size_t>(n * n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) E.push_back(space.excitation_summed(p, q));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double hpq = h1(p, q);
      for (int r = 0; r < n; ++r) hpq -= 0.5 * eri(p, r, r, q);
      if (hpq != 0.0) H += hpq * E[static_cast<std::size_t>(p * n + q)];
      SparseOperator rhs = weighted_sum(
          n, space.dim(), [&](int r, int s) { return 0.5 * eri(p, q, r, s); },
          [&](int r, int s) -> const SparseOperator& {
            return E[static_cast<std::size_t>(r * n + s)];
          });
      if (rhs.nonZeros() > 0) H += E[static_cast<std::size_t>(p * n + q)] * rhs;
    }
  H.prune(0.0);
  return H;
}

GroundState ground_state(const SparseOperator& H, const MonomerFockSpace& space,
                         int n_elec, std::optional<int> twice_sz) {
  const std::vector<int> counts = space.electron_counts();
  const std::vector<int> sz = space.twice_sz();
  std::vector<Eigen::Index> idx;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == n_elec && (!twice_sz || sz[x] == *twice_sz)) {
      idx.push_back(static_cast<Eigen::Index>(x));
    }
  }
  if (idx.empty()) {
    throw OracleError(fmt::format("ground_state: empty sector n={}", n_elec));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  const Matrix dense = Matrix(H);
  Matrix block(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) block(i, j) = dense(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (block + block.transpose()));
  GroundState gs;
  gs.energy = es.eigenvalues()(0);
  gs.gap = m > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;
  Vector v = es.eigenvectors().col(0);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
  gs.state = Vector::Zero(space.dim());
  for (Eigen::Index i = 0; i < m; ++i) gs.state(idx[i]) = v(i);
  return gs;
}

double expectation(const SparseOperator& op, const Vector& psi) {
  return psi.dot(op * psi);
}

FirstOrderEnergy first_order_energy(const Vector& psi, const SparseOperator& V,
                                    const SparseOperator& P,
                                    const SparseOperator& VP) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw OracleError(
        fmt::format("first_order_energy: state norm {:.12f}", psi.norm()));
  }
  FirstOrderEnergy e;
  const double v = expectation(V, psi);
  const double p = expectation(P, psi);
  const double vp = expectation(VP, psi);
  e.e_pol = v;
  e.e_exch = vp - v * p;
  e.e_int = e.e_pol + e.e_exch;
  return e;
}

double max_abs_entry(const SparseOperator& op) {
  double m = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double hermiticity_error(const SparseOperator& op) {
  return max_abs_entry(SparseOperator(op - transpose(op)));
}

double max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
  return max_abs_entry(SparseOperator(a - b));
}

double number_commutator_error(const SparseOperator& op,
                               const DimerFockSpace& space) {
  const std::vector<int> na = space.A().electron_counts();
  const std::vector<int> nb = space.B().electron_counts();
  const Eigen::Index db = space.B().dim();
  double m = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it) {
      const auto r = it.row();
      const auto c = it.col();
      const int da = na[static_cast<std::size_t>(r / db)] -
                     na[static_cast<std::size_t>(c / db)];
      const int dbn = nb[static_cast<std::size_t>(r % db)] -
                      nb[static_cast<std::size_t>(c % db)];
      m = std::max(m, std::abs(it.value()) *
                          std::max(std::abs(da), std::abs(dbn)));
    }
  return m;
}

Vector random_sector_state(const MonomerFockSpace& space, int n_elec,
                           std::optional<int> twice_sz, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  const std::vector<int> counts = space.electron_counts();
  const std::vector<int> sz = space.twice_sz();
  Vector psi = Vector::Zero(space.dim());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == n_elec && (!twice_sz || sz[x] == *twice_sz)) {
      psi(static_cast<Eigen::Index>(x)) = normal(rng);
    }
  }
  const double n = psi.norm();
  if (n == 0.0) {
    throw OracleError(fmt::format("random_sector_state: empty sector n={}",
                                  n_elec));
  }
  return psi / n;
}

Vector embed_frozen_core(const MonomerFockSpace& full,
                         const std::vector<int>& core,
                         const std::vector<int>& active,
                         const Vector& psi_active) {
  const int n = full.n_orb();
  const int n_act = static_cast<int>(active.size());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const std::vector<int>* list : {&core, &active})
    for (int p : *list) {
      if (p < 0 || p >= n || used[static_cast<std::size_t>(p)]) {
        throw OracleError(fmt::format(
            "embed_frozen_core: orbital {} out of range or repeated", p));
      }
      used[static_cast<std::size_t>(p)] = true;
    }
  if (psi_active.size() != (Eigen::Index{1} << (2 * n_act))) {
    throw OracleError(fmt::format(
        "embed_frozen_core: state length {} does not match {} active orbitals",
        psi_active.size(), n_act));
  }
  std::uint64_t core_bits = 0;
  for (int s = 0; s < 2; ++s)
    for (int p : core) core_bits |= std::uint64_t{1} << full.mode(s, p);
  Vector out = Vector::Zero(full.dim());
  for (Eigen::Index x = 0; x < psi_active.size(); ++x) {
    if (psi_active(x) == 0.0) continue;
    std::uint64_t bits = 0;
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < n_act; ++k)
        if ((static_cast<std::uint64_t>(x) >> (s * n_act + k)) & 1U)
          bits |= std::uint64_t{1} << full.mode(s, active[static_cast<std::size_t>(k)]);
    int swaps = 0;
    for (int m = 0; m < full.n_modes(); ++m)
      if ((core_bits >> m) & 1U)
        swaps += std::popcount(bits & ((std::uint64_t{1} << m) - 1));
    out(static_cast<Eigen::Index>(bits | core_bits)) =
        (swaps % 2 == 0 ? 1.0 : -1.0) * psi_active(x);
  }
  return out;
}

}  // namespace sapteve
