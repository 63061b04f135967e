// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sapteve/errors.hpp"

namespace sapteve {

/** @brief Dense real matrix used for every rank-2 quantity. */
using Matrix = Eigen::MatrixXd;

/** @brief Dense real vector. */
using Vector = Eigen::VectorXd;

/** @brief Row-major dense matrix used for grouped-index views. */
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * @class Tensor4
 * @brief Dense row-major rank-4 array of float64 values.
 *
 * Element (i, j, k, l) lives at offset ((i*d1 + j)*d2 + k)*d3 + l. The
 * grouped matrix view pairs the first two and last two indices, which is the
 * (j1 j2) x (j3 j4) grouping used by the factorization module.
 */
class Tensor4 {
 public:
  /** @brief Index extents of the four axes. */
  using Dims = std::array<int, 4>;

  Tensor4() = default;

  /**
   * @brief Allocates a tensor of the given extents filled with @p fill.
   * @throws DimensionError if any extent is negative.
   */
  Tensor4(int d0, int d1, int d2, int d3, double fill = 0.0);

  /** @brief Allocates a zero tensor of the given extents. */
  explicit Tensor4(const Dims& dims, double fill = 0.0)
      : Tensor4(dims[0], dims[1], dims[2], dims[3], fill) {}

  double& operator()(int i, int j, int k, int l) {
    return data_[offset(i, j, k, l)];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[offset(i, j, k, l)];
  }

  /** @brief Extents of all four axes. */
  const Dims& dims() const noexcept { return dims_; }
  /** @brief Extent of axis @p axis. */
  int dim(int axis) const { return dims_.at(static_cast<std::size_t>(axis)); }
  /** @brief Total element count. */
  std::size_t size() const noexcept { return data_.size(); }
  /** @brief True when the tensor holds no elements. */
  bool empty() const noexcept { return data_.empty(); }

  /** @brief Flat row-major storage. */
  const std::vector<double>& values() const noexcept { return data_; }
  /** @brief Mutable flat row-major storage. */
  std::vector<double>& values() noexcept { return data_; }

  /** @brief Copies the (d0 d1) x (d2 d3) grouped matrix. */
  Matrix grouped() const;

  /**
   * @brief Builds a tensor from a (d0 d1) x (d2 d3) grouped matrix.
   * @throws DimensionError if the matrix shape does not match the extents.
   */
  static Tensor4 from_grouped(const Matrix& m, const Dims& dims);

  /** @brief Frobenius norm. */
  double frobenius_norm() const;
  /** @brief Sum of absolute values. */
  double l1_norm() const;
  /** @brief Largest absolute entry (0 for an empty tensor). */
  double max_abs() const;

  /** @brief Multiplies every entry by @p s in place. */
  Tensor4& operator*=(double s);
  /**
   * @brief Adds @p other entrywise in place.
   * @throws DimensionError on extent mismatch.
   */
  Tensor4& operator+=(const Tensor4& other);
  /**
   * @brief Subtracts @p other entrywise in place.
   * @throws DimensionError on extent mismatch.
   */
  Tensor4& operator-=(const Tensor4& other);

  /**
   * @brief Returns r with r(x0, x1, x2, x3) equal to
   * this(x[perm[0]], x[perm[1]], x[perm[2]], x[perm[3]]).
   */
  Tensor4 permuted(const std::array<int, 4>& perm) const;

 private:
  std::size_t offset(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * static_cast<std::size_t>(dims_[1]) +
             static_cast<std::size_t>(j)) *
                static_cast<std::size_t>(dims_[2]) +
            static_cast<std::size_t>(k)) *
               static_cast<std::size_t>(dims_[3]) +
           static_cast<std::size_t>(l);
  }

  Dims dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

/** @brief Entrywise sum. */
Tensor4 operator+(Tensor4 a, const Tensor4& b);
/** @brief Entrywise difference. */
Tensor4 operator-(Tensor4 a, const Tensor4& b);
/** @brief Scalar multiple. */
Tensor4 operator*(double s, Tensor4 a);

/**
 * @brief Largest absolute entrywise difference of two equally shaped tensors.
 * @throws DimensionError on extent mismatch.
 */
double max_abs_diff(const Tensor4& a, const Tensor4& b);

/** @brief Formats extents as "[d0,d1,d2,d3]" for error messages. */
std::string dims_to_string(const Tensor4::Dims& dims);

/**
 * @brief Throws DimensionError unless @p t has exactly the extents @p dims.
 * @param what Name used in the error message.
 */
void require_dims(const Tensor4& t, const Tensor4::Dims& dims,
                  const std::string& what);

/**
 * @brief Throws DimensionError unless @p m is rows x cols.
 * @param what Name used in the error message.
 */
void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what);

/** @brief Sum of absolute values of a matrix. */
double l1_norm(const Matrix& m);

}  // namespace sapteve
