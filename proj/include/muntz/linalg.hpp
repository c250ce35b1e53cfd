#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "muntz/real.hpp"

namespace muntz {

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<Real>;

/// LU factorization with partial pivoting, PA = LU.
class LuDecomposition {
 public:
  explicit LuDecomposition(RealMatrix a);

  bool singular() const { return singular_; }
  Real determinant() const;
  /// Solves A x = b. Throws NumericalFailure when A is singular.
  std::vector<Real> solve(std::span<const Real> b) const;

 private:
  RealMatrix lu_;
  std::vector<std::size_t> perm_;
  int parity_ = 1;
  bool singular_ = false;
};

Real determinant(RealMatrix a);

/// Least-squares solve of A X = B (A with rows >= cols) by Householder QR.
/// B holds one right-hand side per column. Throws NumericalFailure when the
/// smallest |R_jj| falls below `rank_tolerance` times the largest.
RealMatrix qr_solve(RealMatrix a, RealMatrix b, double rank_tolerance);

}  // namespace muntz
