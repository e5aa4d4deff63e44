// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_MATRIX_HPP
#define DETSEC_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "detsec/field.hpp"

namespace detsec {

/// Thrown when an operation needs an invertible matrix and gets a singular one.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix over a prime field. Zero-sized dimensions are allowed.
class Mat {
 public:
  Mat(Field field, std::size_t rows, std::size_t cols);
  /// Builds from integer rows, reducing each entry into the field.
  Mat(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static Mat identity(Field field, std::size_t n);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Fe& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Fe operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  /// Bounds-checked access.
  Fe at(std::size_t r, std::size_t c) const;

  std::span<Fe> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Fe> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool is_zero() const noexcept;

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Fe> data_;
};

std::ostream& operator<<(std::ostream& os, const Mat& a);

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
/// [a | b]
Mat hstack(const Mat& a, const Mat& b);
/// [a ; b]
Mat vstack(const Mat& a, const Mat& b);

/// A(rows, cols) in the given order. Indices are 0-based.
Mat submatrix(const Mat& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols);
/// Contiguous block [r0, r0 + nr) x [c0, c0 + nc).
Mat block(const Mat& a, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc);

std::size_t rank(const Mat& a);
Fe det(const Mat& a);
/// Throws SingularMatrixError if `a` is not invertible, std::invalid_argument if not square.
Mat inverse(const Mat& a);

/// Indices of the first linearly independent columns, scanning left to right.
std::vector<std::size_t> independent_columns(const Mat& a);

struct SolveResult {
  bool consistent = false;
  /// True when A has full column rank, so X is the only solution.
  bool unique = false;
  /// A solution with every free variable set to zero; empty when inconsistent.
  std::optional<Mat> x;
};

/// Solves A X = Y.
SolveResult solve(const Mat& a, const Mat& y);

/// True when every row of `b` lies in the row space of `a`.
bool row_space_contains(const Mat& a, const Mat& b);

}  // namespace detsec

#endif  // DETSEC_MATRIX_HPP
