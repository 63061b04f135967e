// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace sapteve {

Tensor4::Tensor4(int d0, int d1, int d2, int d3, double fill)
    : dims_{d0, d1, d2, d3} {
  if (d0 < 0 || d1 < 0 || d2 < 0 || d3 < 0) {
    throw DimensionError("Tensor4: negative extent " + dims_to_string(dims_));
  }
  data_.assign(static_cast<std::size_t>(d0) * static_cast<std::size_t>(d1) *
                   static_cast<std::size_t>(d2) * static_cast<std::size_t>(d3),
               fill);
}

Matrix Tensor4::grouped() const {
  const Eigen::Index rows = static_cast<Eigen::Index>(dims_[0]) * dims_[1];
  const Eigen::Index cols = static_cast<Eigen::Index>(dims_[2]) * dims_[3];
  return Eigen::Map<const RowMatrix>(data_.data(), rows, cols);
}

Tensor4 Tensor4::from_grouped(const Matrix& m, const Dims& dims) {
  Tensor4 t(dims);
  const Eigen::Index rows = static_cast<Eigen::Index>(dims[0]) * dims[1];
  const Eigen::Index cols = static_cast<Eigen::Index>(dims[2]) * dims[3];
  require_shape(m, rows, cols, "grouped matrix");
  Eigen::Map<RowMatrix>(t.data_.data(), rows, cols) = m;
  return t;
}

double Tensor4::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Tensor4::l1_norm() const {
  double s = 0.0;
  for (double x : data_) s += std::abs(x);
  return s;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Tensor4& Tensor4::operator+=(const Tensor4& other) {
  require_dims(other, dims_, "addend");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& other) {
  require_dims(other, dims_, "subtrahend");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor4 Tensor4::permuted(const std::array<int, 4>& perm) const {
  Dims out{};
  for (int a = 0; a < 4; ++a) out[perm[a]] = dims_[a];
  Tensor4 r(out);
  std::array<int, 4> x{};
  for (x[0] = 0; x[0] < out[0]; ++x[0])
    for (x[1] = 0; x[1] < out[1]; ++x[1])
      for (x[2] = 0; x[2] < out[2]; ++x[2])
        for (x[3] = 0; x[3] < out[3]; ++x[3]) {
          r(x[0], x[1], x[2], x[3]) =
              (*this)(x[perm[0]], x[perm[1]], x[perm[2]], x[perm[3]]);
        }
  return r;
}

Tensor4 operator+(Tensor4 a, const Tensor4& b) {
  a += b;
  return a;
}

Tensor4 operator-(Tensor4 a, const Tensor4& b) {
  a -= b;
  return a;
}

Tensor4 operator*(double s, Tensor4 a) {
  a *= s;
  return a;
}

double max_abs_diff(const Tensor4& a, const Tensor4& b) {
  require_dims(b, a.dims(), "comparison operand");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

std::string dims_to_string(const Tensor4::Dims& dims) {
  return fmt::format("[{},{},{},{}]", dims[0], dims[1], dims[2], dims[3]);
}

void require_dims(const Tensor4& t, const Tensor4::Dims& dims,
                  const std::string& what) {
  if (t.dims() != dims) {
    throw DimensionError(fmt::format("{}: expected extents {}, got {}", what,
                                     dims_to_string(dims),
                                     dims_to_string(t.dims())));
  }
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(fmt::format("{}: expected {}x{}, got {}x{}", what,
                                     rows, cols, m.rows(), m.cols()));
  }
}

double l1_norm(const Matrix& m) { return m.cwiseAbs().sum(); }

}  // namespace sapteve
