// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <catch_amalgamated.hpp>
#include <random>

#include "sapteve/active_space.hpp"
#include "sapteve/factorization.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;
using Catch::Approx;

namespace {

Matrix random_matrix(int r, int c, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

Matrix random_symmetric(int n, unsigned seed) {
  const Matrix m = random_matrix(n, n, seed);
  return 0.5 * (m + m.transpose());
}

double orthonormality_error(const Matrix& U) {
  if (U.cols() == 0) return 0.0;
  return (U.transpose() * U - Matrix::Identity(U.cols(), U.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double relative_error(const Tensor4& a, const Tensor4& ref) {
  const double scale = ref.frobenius_norm();
  const double diff = (a - ref).frobenius_norm();
  return scale > 0.0 ? diff / scale : diff;
}

DimerTensors kernel_dimer(int n_span, int na, int nb, unsigned seed,
                          int n_elec = 2) {
  KernelDimerOptions opt;
  opt.n_span = n_span;
  opt.n_orb_A = na;
  opt.n_orb_B = nb;
  opt.n_elec_A = n_elec;
  opt.n_elec_B = n_elec;
  opt.seed = seed;
  opt.overlap_noise = 0.05;
  return make_kernel_dimer(opt);
}

void check_round_trip(const SaptCoefficients& c) {
  const FactorizedOperator f = factorize(c);
  for (const auto& [label, block] : c.two_body_blocks) {
    INFO("observable " << to_string(c.observable) << " block " << label);
    CHECK(relative_error(reconstruct(f, label), block) <= 1e-10);
  }
  CHECK((f.one_body_A.reconstruct() - c.one_body_A).norm() <=
        1e-10 * std::max(1.0, c.one_body_A.norm()));
  CHECK((f.one_body_B.reconstruct() - c.one_body_B).norm() <=
        1e-10 * std::max(1.0, c.one_body_B.norm()));
  for (const auto& [label, b] : f.blocks) {
    const double entrywise = l1_norm(c.block(label).permuted(b.layout.perm).grouped());
    INFO("trace-norm bound for block " << label);
    CHECK(b.outer_l1() <= entrywise * (1.0 + 1e-12));
    for (const auto& t : b.terms) {
      CHECK(orthonormality_error(t.left.U) <= 1e-10);
      CHECK(orthonormality_error(t.right.U) <= 1e-10);
      if (!t.left.symmetric) CHECK(orthonormality_error(t.left.V) <= 1e-10);
      if (!t.right.symmetric) CHECK(orthonormality_error(t.right.V) <= 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("First factorization of trivial blocks", "[factorization]") {
  SECTION("zero matrix gives no factors") {
    const auto f = first_factorize(Matrix::Zero(4, 4), true);
    CHECK(f.s.empty());
  }
  SECTION("rank-one symmetric block") {
    Vector x(4);
    x << 1.0, -2.0, 0.5, 3.0;
    const double c = 0.7;
    const auto f = first_factorize(c * x * x.transpose(), true);
    REQUIRE(f.s.size() == 1);
    CHECK(f.s[0] == Approx(c * x.squaredNorm()).epsilon(1e-12));
    CHECK((f.u[0] - x / x.norm()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SECTION("trace norm is bounded by the entrywise norm") {
    const Matrix m = random_symmetric(4, 11);
    const auto f = first_factorize(m, true);
    double trace_norm = 0.0;
    for (double s : f.s) trace_norm += std::abs(s);
    CHECK(trace_norm <= l1_norm(m));
    for (std::size_t t = 1; t < f.s.size(); ++t)
      CHECK(std::abs(f.s[t - 1]) >= std::abs(f.s[t]));
  }
  SECTION("asymmetric input with the symmetric flag is rejected") {
    Matrix m = random_symmetric(3, 5);
    m(0, 1) += 1e-6;
    CHECK_THROWS_AS(first_factorize(m, true), ContractViolation);
  }
}

TEST_CASE("Second factorization branches", "[factorization]") {
  SECTION("identity") {
    const auto f = second_factorize(Matrix::Identity(3, 3), true);
    REQUIRE(f.weights.size() == 3);
    CHECK((f.weights.array() - 1.0).abs().maxCoeff() <= 1e-14);
    CHECK((f.U.cwiseAbs() * f.U.cwiseAbs().transpose() -
           Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SECTION("diagonal entries ordered by magnitude") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 2.0;
    const auto f = second_factorize(m, true);
    REQUIRE(f.weights.size() == 2);
    CHECK(f.weights[0] == Approx(2.0));
    CHECK(f.weights[1] == Approx(-1.0));
    CHECK(f.U(1, 0) == Approx(1.0));
    CHECK(f.U(0, 1) == Approx(1.0));
  }
  SECTION("rectangular SVD") {
    const Matrix m = random_matrix(3, 2, 7);
    const auto f = second_factorize(m, false);
    CHECK(orthonormality_error(f.U) <= 1e-12);
    CHECK(orthonormality_error(f.V) <= 1e-12);
    CHECK((f.reconstruct() - m).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(f.weights.minCoeff() >= 0.0);
  }
  SECTION("non-finite input is rejected") {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 0) = std::nan("");
    CHECK_THROWS_AS(second_factorize(m, false), ContractViolation);
  }
}

TEST_CASE("Overlap SVD", "[factorization]") {
  SECTION("identity overlap") {
    const auto f = overlap_svd(Matrix::Identity(2, 2));
    CHECK(f.s.size() == 2);
    CHECK(f.lambda_s() == Approx(2.0));
  }
  SECTION("diagonal overlap") {
    Matrix S = Matrix::Zero(2, 2);
    S(0, 0) = 1.0;
    S(1, 1) = 0.5;
    const auto f = overlap_svd(S);
    REQUIRE(f.s.size() == 2);
    CHECK(f.s[0] == Approx(1.0));
    CHECK(f.s[1] == Approx(0.5));
    CHECK(f.lambda_s() == Approx(1.5));
  }
  SECTION("random tall overlap") {
    const Matrix S = 0.3 * random_matrix(4, 2, 3);
    const auto f = overlap_svd(S);
    CHECK(f.s.size() <= 2);
    CHECK((f.reconstruct() - S).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("One-body eigendecomposition", "[factorization]") {
  CHECK(one_body_eigendecompose(Matrix::Zero(3, 3)).values.size() == 0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 3.0;
  const auto e = one_body_eigendecompose(d);
  REQUIRE(e.values.size() == 2);
  CHECK(e.values[0] == Approx(3.0));
  CHECK(e.values[1] == Approx(-1.0));
  const Matrix m = random_symmetric(5, 17);
  const auto r = one_body_eigendecompose(m);
  CHECK((r.reconstruct() - m).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(orthonormality_error(r.vectors) <= 1e-12);
  for (Eigen::Index k = 0; k < r.vectors.cols(); ++k) {
    Eigen::Index imax = 0;
    r.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    CHECK(r.vectors(imax, k) > 0.0);
  }
  Matrix bad = m;
  bad(0, 4) += 1e-6;
  CHECK_THROWS_AS(one_body_eigendecompose(bad), ContractViolation);
}

TEST_CASE("Every coefficient block reconstructs exactly", "[factorization]") {
  for (int n : {2, 4, 8}) {
    INFO("N_A = N_B = " << n);
    const DimerTensors t = kernel_dimer(n, n, n, 100u + static_cast<unsigned>(n));
    const auto set = build_majorana_coefficients(t);
    check_round_trip(set.V);
    check_round_trip(set.P);
    REQUIRE(set.VP.has_value());
    check_round_trip(*set.VP);
  }
  SECTION("unequal monomers and active-space blocks") {
    const DimerTensors t = kernel_dimer(5, 4, 3, 42, 4);
    const auto set = build_majorana_coefficients(t);
    check_round_trip(*set.VP);
    SpacePartition part;
    part.core_A = {0};
    part.active_A = {1, 2, 3};
    part.core_B = {0};
    part.active_B = {1, 2};
    const auto active = build_active_coefficients(t, part);
    REQUIRE(active.VP.has_value());
    REQUIRE(active.VP->has_block(kBlock1k));
    check_round_trip(active.V);
    check_round_trip(active.P);
    check_round_trip(*active.VP);
  }
}

TEST_CASE("Factorization is deterministic", "[factorization]") {
  const DimerTensors t = kernel_dimer(4, 3, 3, 9);
  const auto vp = build_vp_coefficients(t);
  const auto a = factorize(vp);
  const auto b = factorize(vp);
  for (const auto& [label, ba] : a.blocks) {
    const auto& bb = b.block(label);
    REQUIRE(ba.terms.size() == bb.terms.size());
    for (std::size_t i = 0; i < ba.terms.size(); ++i) {
      CHECK(ba.terms[i].s == bb.terms[i].s);
      CHECK(ba.terms[i].left.U == bb.terms[i].left.U);
    }
  }
}

TEST_CASE("Truncation", "[factorization]") {
  const DimerTensors t = kernel_dimer(5, 4, 4, 31);
  const auto vp = build_vp_coefficients(t);
  const FactorizedOperator exact = factorize(vp);

  SECTION("zero threshold is the identity") {
    const auto f = truncate(exact, 0.0);
    for (const auto& [label, b] : exact.blocks) {
      CHECK(f.block(label).terms.size() == b.terms.size());
      CHECK(f.block(label).discarded_weight == 0.0);
      CHECK(max_abs_diff(reconstruct(f, label), reconstruct(exact, label)) == 0.0);
    }
  }
  SECTION("a single factor survives any threshold") {
    Vector x(3);
    x << 1.0, 2.0, -1.0;
    const Matrix xx = x * x.transpose();
    Tensor4 block(3, 3, 3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) block(a, b, c, d) = xx(a, b) * xx(c, d);
    FactorizedOperator f;
    f.blocks.emplace(kBlockA2, factorize_block(kBlockA2, block));
    REQUIRE(f.block(kBlockA2).terms.size() == 1);
    const auto g = truncate(f, 0.5);
    CHECK(g.block(kBlockA2).terms.size() == 1);
    CHECK(relative_error(reconstruct(g, kBlockA2), block) <= 1e-12);
  }
  SECTION("weights shrink monotonically and residuals respect the bound") {
    double previous = std::numeric_limits<double>::infinity();
    for (double thr : {0.0, 1e-3, 1e-2, 0.05, 0.2, 0.5}) {
      const auto f = truncate(exact, thr);
      double total = 0.0;
      for (const auto& [label, b] : f.blocks) {
        total += b.weighted_l1();
        const double residual =
            (reconstruct(f, label) - vp.block(label)).frobenius_norm();
        INFO("threshold " << thr << " block " << label);
        CHECK(residual <= 2.0 * b.discarded_weight + 1e-12);
      }
      CHECK(total <= previous + 1e-14);
      previous = total;
    }
  }
  SECTION("thresholds outside [0, 1) are rejected") {
    CHECK_THROWS_AS(truncate(exact, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(truncate(exact, -0.1), std::invalid_argument);
  }
}

TEST_CASE("Unknown block labels are rejected", "[factorization]") {
  FactorizedOperator f;
  CHECK_THROWS_AS(reconstruct(f, "nope"), std::out_of_range);
  CHECK_THROWS_AS(block_layout("nope"), std::out_of_range);
}
