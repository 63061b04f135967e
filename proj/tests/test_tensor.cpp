// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <catch_amalgamated.hpp>

#include "sapteve/tensor.hpp"

using namespace sapteve;

TEST_CASE("Tensor4 stores row-major and groups pairs", "[tensor]") {
  Tensor4 t(2, 3, 2, 3);
  double x = 0.0;
  for (double& v : t.values()) v = x++;
  REQUIRE(t(1, 2, 1, 0) == Catch::Approx(((1 * 3 + 2) * 2 + 1) * 3 + 0));
  const Matrix g = t.grouped();
  REQUIRE(g.rows() == 6);
  REQUIRE(g.cols() == 6);
  REQUIRE(g(1 * 3 + 2, 1 * 3 + 0) == t(1, 2, 1, 0));
  const Tensor4 back = Tensor4::from_grouped(g, t.dims());
  REQUIRE(max_abs_diff(back, t) == 0.0);
}

TEST_CASE("Tensor4 permutation reads source axes in order", "[tensor]") {
  Tensor4 t(2, 3, 4, 5);
  double x = 1.0;
  for (double& v : t.values()) v = x++;
  const Tensor4 r = t.permuted({2, 3, 0, 1});
  REQUIRE(r.dims() == Tensor4::Dims{4, 5, 2, 3});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 5; ++d) REQUIRE(r(c, d, a, b) == t(a, b, c, d));
}

TEST_CASE("Tensor4 norms and arithmetic", "[tensor]") {
  Tensor4 a(1, 1, 2, 2);
  a(0, 0, 0, 0) = 3.0;
  a(0, 0, 1, 1) = -4.0;
  REQUIRE(a.frobenius_norm() == Catch::Approx(5.0));
  REQUIRE(a.l1_norm() == Catch::Approx(7.0));
  REQUIRE(a.max_abs() == Catch::Approx(4.0));
  const Tensor4 b = 2.0 * a - a;
  REQUIRE(max_abs_diff(a, b) == 0.0);
  REQUIRE_THROWS_AS(a += Tensor4(1, 1, 1, 2), DimensionError);
  REQUIRE_THROWS_AS(Tensor4(-1, 1, 1, 1), DimensionError);
}
