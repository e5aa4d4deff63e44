// SPDX-License-Identifier: Apache-2.0

#include "detsec/matrix.hpp"

#include <string>
#include <utility>

namespace detsec {

namespace {

void require_same_field(const Mat& a, const Mat& b, const char* what) {
  if (!(a.field() == b.field())) throw std::invalid_argument(std::string(what) + ": field mismatch");
}

std::string dims(const Mat& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

// In-place reduced row echelon form over the first `limit` columns. Row
// operations are applied to the full width so augmented blocks follow along.
// Returns the pivot columns.
std::vector<std::size_t> rref(Mat& a, std::size_t limit) {
  const Field& f = a.field();
  const std::uint64_t q = f.q();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < limit && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).value == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      auto rp = a.row(p);
      auto rr = a.row(r);
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(rp[k], rr[k]);
    }
    auto prow = a.row(r);
    Fe scale = f.inv(prow[c]);
    for (std::size_t k = c; k < a.cols(); ++k) prow[k] = f.mul(prow[k], scale);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      auto row = a.row(i);
      std::uint64_t factor = row[c].value;
      if (factor == 0) continue;
      std::uint64_t neg = q - factor;
      for (std::size_t k = c; k < a.cols(); ++k) {
        if (prow[k].value == 0) continue;
        row[k].value = static_cast<std::uint32_t>((row[k].value + neg * prow[k].value) % q);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Mat::Mat(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols) {}

Mat::Mat(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : field_(field), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Mat: ragged initializer");
    for (std::int64_t v : r) data_.push_back(field_.from_int(v));
  }
}

Mat Mat::identity(Field field, std::size_t n) {
  Mat m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Fe Mat::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw std::out_of_range("Mat::at(" + std::to_string(r) + "," + std::to_string(c) +
                            ") on " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return (*this)(r, c);
}

bool Mat::is_zero() const noexcept {
  for (Fe v : data_) {
    if (v.value != 0) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Mat& a) {
  os << '[';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < a.cols(); ++c) os << (c ? "," : "") << a(r, c);
    os << ']';
  }
  return os << ']';
}

Mat matmul(const Mat& a, const Mat& b) {
  require_same_field(a, b, "matmul");
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: " + dims(a) + " * " + dims(b));
  const std::uint64_t q = a.field().q();
  Mat out(a.field(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::uint64_t aik = a(i, k).value;
      if (aik == 0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        // q < 2^31, so one product plus a reduced accumulator stays below 2^63.
        acc[j] = (acc[j] + aik * brow[j].value) % q;
      }
    }
    auto orow = out.row(i);
    for (std::size_t j = 0; j < b.cols(); ++j) orow[j].value = static_cast<std::uint32_t>(acc[j]);
  }
  return out;
}

Mat transpose(const Mat& a) {
  Mat t(a.field(), a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

Mat add(const Mat& a, const Mat& b) {
  require_same_field(a, b, "add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: " + dims(a) + " + " + dims(b));
  Mat out(a.field(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().add(a(r, c), b(r, c));
  return out;
}

Mat sub(const Mat& a, const Mat& b) {
  require_same_field(a, b, "sub");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("sub: " + dims(a) + " - " + dims(b));
  Mat out(a.field(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().sub(a(r, c), b(r, c));
  return out;
}

Mat hstack(const Mat& a, const Mat& b) {
  require_same_field(a, b, "hstack");
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: " + dims(a) + " | " + dims(b));
  Mat out(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

Mat vstack(const Mat& a, const Mat& b) {
  require_same_field(a, b, "vstack");
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: " + dims(a) + " ; " + dims(b));
  Mat out(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  return out;
}

Mat submatrix(const Mat& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  Mat out(a.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a.at(rows[i], cols[j]);
  }
  return out;
}

Mat block(const Mat& a, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
  if (r0 + nr > a.rows() || c0 + nc > a.cols()) throw std::out_of_range("block: out of range");
  Mat out(a.field(), nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = a(r0 + i, c0 + j);
  return out;
}

std::size_t rank(const Mat& a) {
  Mat work = a;
  return rref(work, work.cols()).size();
}

Fe det(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det: matrix is " + dims(a));
  const Field& f = a.field();
  Mat work = a;
  // Plain forward elimination; the product of pivots gives the determinant.
  Fe result = f.one();
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && work(p, c).value == 0) ++p;
    if (p == n) return f.zero();
    if (p != c) {
      auto rp = work.row(p);
      auto rc = work.row(c);
      for (std::size_t k = 0; k < n; ++k) std::swap(rp[k], rc[k]);
      result = f.neg(result);
    }
    Fe pivot = work(c, c);
    result = f.mul(result, pivot);
    Fe pinv = f.inv(pivot);
    for (std::size_t i = c + 1; i < n; ++i) {
      Fe factor = f.mul(work(i, c), pinv);
      if (factor.value == 0) continue;
      for (std::size_t k = c; k < n; ++k) work(i, k) = f.sub(work(i, k), f.mul(factor, work(c, k)));
    }
  }
  return result;
}

Mat inverse(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is " + dims(a));
  const std::size_t n = a.rows();
  Mat aug = hstack(a, Mat::identity(a.field(), n));
  if (rref(aug, n).size() != n) throw SingularMatrixError("inverse: singular " + dims(a) + " matrix");
  return block(aug, 0, n, n, n);
}

std::vector<std::size_t> independent_columns(const Mat& a) {
  Mat work = a;
  return rref(work, work.cols());
}

SolveResult solve(const Mat& a, const Mat& y) {
  require_same_field(a, y, "solve");
  if (a.rows() != y.rows()) throw std::invalid_argument("solve: " + dims(a) + " vs rhs " + dims(y));
  Mat aug = hstack(a, y);
  // Eliminate over every column: a pivot landing in the rhs block means 0 = nonzero.
  auto pivots = rref(aug, aug.cols());
  SolveResult res;
  std::size_t a_pivots = 0;
  for (std::size_t p : pivots) {
    if (p >= a.cols()) return res;
    ++a_pivots;
  }
  res.consistent = true;
  res.unique = (a_pivots == a.cols());
  Mat x(a.field(), a.cols(), y.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    for (std::size_t c = 0; c < y.cols(); ++c) x(pivots[i], c) = aug(i, a.cols() + c);
  }
  res.x = std::move(x);
  return res;
}

bool row_space_contains(const Mat& a, const Mat& b) {
  return rank(vstack(a, b)) == rank(a);
}

}  // namespace detsec
