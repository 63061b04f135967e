// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/synthetic.hpp"

#include <fmt/format.h>
#include <random>

namespace sapteve {

namespace {

Matrix orthonormal_columns(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

Tensor4 random_kernel(int n, double scale, std::mt19937& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Tensor4 k(n, n, n, n);
  for (double& x : k.values()) x = normal(rng);
  Tensor4 s(n, n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          s(i, j, a, b) = 0.125 * (k(i, j, a, b) + k(j, i, a, b) +
                                   k(i, j, b, a) + k(j, i, b, a) +
                                   k(a, b, i, j) + k(b, a, i, j) +
                                   k(a, b, j, i) + k(b, a, j, i));
        }
  return s;
}

/** @brief r(w,x,y,z) = sum K(i,j,k,l) c1(i,w) c2(j,x) c3(k,y) c4(l,z). */
Tensor4 transform(const Tensor4& K, const Matrix& c1, const Matrix& c2,
                  const Matrix& c3, const Matrix& c4) {
  const int n = K.dim(0);
  auto step = [n](const Tensor4& in, const Matrix& c) {
    // Contracts axis 0 with c and rotates it to the back.
    const int m = static_cast<int>(c.cols());
    Tensor4 out(in.dim(1), in.dim(2), in.dim(3), m);
    for (int j = 0; j < in.dim(1); ++j)
      for (int k = 0; k < in.dim(2); ++k)
        for (int l = 0; l < in.dim(3); ++l)
          for (int w = 0; w < m; ++w) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += in(i, j, k, l) * c(i, w);
            out(j, k, l, w) = s;
          }
    return out;
  };
  return step(step(step(step(K, c1), c2), c3), c4);
}

}  // namespace

DimerTensors make_kernel_dimer(const KernelDimerOptions& opt) {
  if (opt.n_orb_A < 1 || opt.n_orb_B < 1 || opt.n_orb_A > opt.n_span ||
      opt.n_orb_B > opt.n_span) {
    throw DimensionError(fmt::format(
        "make_kernel_dimer: orbitals ({}, {}) do not fit a span of {}",
        opt.n_orb_A, opt.n_orb_B, opt.n_span));
  }
  std::mt19937 rng(opt.seed);
  const Matrix ua = orthonormal_columns(opt.n_span, opt.n_orb_A, rng);
  const Matrix ub = orthonormal_columns(opt.n_span, opt.n_orb_B, rng);
  const Tensor4 K = random_kernel(opt.n_span, opt.kernel_scale, rng);

  DimerTensors t;
  t.basis = DimerBasis{opt.n_orb_A, opt.n_orb_B, opt.n_elec_A, opt.n_elec_B,
                       true};
  t.v = transform(K, ua, ua, ub, ub);
  t.S = ua.transpose() * ub;
  if (opt.overlap_noise > 0.0) {
    std::uniform_real_distribution<double> u(-opt.overlap_noise,
                                             opt.overlap_noise);
    for (Eigen::Index i = 0; i < t.S.size(); ++i) t.S.data()[i] += u(rng);
  }
  if (opt.with_exchange_blocks) {
    t.v_abba = transform(K, ua, ub, ub, ua);
    t.v_aaba = transform(K, ua, ua, ub, ua);
    t.v_abbb = transform(K, ua, ub, ub, ub);
  }
  t.validate();
  return t;
}

MonomerIntegrals make_random_monomer(int n_orb, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  MonomerIntegrals m;
  Matrix h(n_orb, n_orb);
  for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = normal(rng);
  m.h1 = 0.5 * (h + h.transpose());
  for (int p = 0; p < n_orb; ++p) m.h1(p, p) += -1.0 + 0.5 * p;
  const Matrix eye = Matrix::Identity(n_orb, n_orb);
  m.eri = transform(random_kernel(n_orb, scale, rng), eye, eye, eye, eye);
  // A positive diagonal keeps the repulsion physically signed.
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q < n_orb; ++q) m.eri(p, p, q, q) += 0.5;
  return m;
}

}  // namespace sapteve
