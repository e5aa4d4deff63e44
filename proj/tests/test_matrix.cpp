// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "detsec/matrix.hpp"
#include "test_util.hpp"

using namespace detsec;
using detsec::testing::random_matrix;

namespace {

// Leibniz expansion; only for tiny matrices.
Fe det_by_permutations(const Mat& a) {
  const Field& f = a.field();
  std::vector<std::size_t> perm(a.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Fe total = f.zero();
  do {
    long inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    Fe term = f.sign(inversions);
    for (std::size_t i = 0; i < perm.size(); ++i) term = f.mul(term, a(i, perm[i]));
    total = f.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Mat vandermonde(const Field& f, const std::vector<std::uint32_t>& pts) {
  Mat v(f, pts.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) v(i, j) = f.pow(Fe{pts[i]}, j);
  return v;
}

}  // namespace

TEST_CASE("matmul") {
  Field f(7);
  Mat a = Mat{f, {{1, 2}, {3, 4}}};
  CHECK(matmul(a, Mat{f, {{1}, {1}}}) == Mat{f, {{3}, {0}}});
  std::mt19937_64 rng(1);
  Mat b = random_matrix(f, 3, 4, rng);
  CHECK(matmul(Mat::identity(f, 3), b) == b);
  CHECK(matmul(b, Mat(f, 4, 2)).is_zero());
  CHECK_THROWS(matmul(b, b));
}

TEST_CASE("rank examples") {
  Field f(7);
  CHECK(rank(Mat::identity(f, 4)) == 4);
  CHECK(rank(Mat(f, 3, 5)) == 0);
  Mat v = vandermonde(f, {1, 2, 3, 4});
  // det of a Vandermonde matrix is prod_{s<t} (x_t - x_s).
  Fe expect = f.one();
  std::vector<std::uint32_t> pts = {1, 2, 3, 4};
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = s + 1; t < 4; ++t) expect = f.mul(expect, f.sub(Fe{pts[t]}, Fe{pts[s]}));
  CHECK(det(v) == expect);
  CHECK(expect != f.zero());
  CHECK(rank(v) == 4);
}

TEST_CASE("inverse examples") {
  Field f(7);
  CHECK(inverse(Mat::identity(f, 5)) == Mat::identity(f, 5));
  CHECK(inverse(Mat{f, {{2, 0}, {0, 3}}}) == Mat{f, {{4, 0}, {0, 5}}});
  CHECK_THROWS_AS(inverse(Mat{f, {{1, 2}, {2, 4}}}), SingularMatrixError);
  CHECK_THROWS_AS(inverse(Mat(f, 2, 3)), std::invalid_argument);

  Field g(11);
  std::mt19937_64 rng(2);
  int done = 0;
  while (done < 20) {
    Mat a = random_matrix(g, 5, 5, rng);
    if (rank(a) < 5) continue;
    CHECK(matmul(a, inverse(a)) == Mat::identity(g, 5));
    CHECK(matmul(inverse(a), a) == Mat::identity(g, 5));
    ++done;
  }
}

TEST_CASE("det examples") {
  Field f(7);
  CHECK(det(Mat::identity(f, 3)) == f.one());
  CHECK(det(Mat{f, {{1, 2, 3}, {1, 2, 3}, {4, 5, 6}}}) == f.zero());
  CHECK(det(vandermonde(f, {1, 2})) == f.one());
}

TEST_CASE("submatrix and block") {
  Field f(7);
  Mat a{f, {{1, 2, 3}, {4, 5, 6}}};
  std::vector<std::size_t> r = {0, 1}, c = {0, 1, 2};
  CHECK(submatrix(a, r, c) == a);
  std::vector<std::size_t> r0 = {0}, c0 = {0};
  CHECK(submatrix(a, r0, c0) == Mat{f, {{1}}});
  std::vector<std::size_t> swap = {2, 0};
  CHECK(submatrix(a, r, swap) == Mat{f, {{3, 1}, {6, 4}}});
  CHECK(block(a, 1, 1, 1, 2) == Mat{f, {{5, 6}}});
  CHECK(hstack(a, a).cols() == 6);
  CHECK(vstack(a, a).rows() == 4);
  CHECK(transpose(transpose(a)) == a);
  CHECK(add(a, a) == Mat{f, {{2, 4, 6}, {1, 3, 5}}});
  CHECK(sub(a, a).is_zero());
}

TEST_CASE("ell x ell block of the first ell columns of a Vandermonde") {
  Field f(11);
  Mat psi(f, 8, 6);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 6; ++j) psi(i, j) = f.pow(Fe{static_cast<std::uint32_t>(i + 1)}, j);
  std::vector<std::size_t> L = {2, 6}, cols = {0, 1};
  Mat b = submatrix(psi, L, cols);
  CHECK(b.rows() == 2);
  CHECK(b.cols() == 2);
  CHECK(rank(b) == 2);
}

TEST_CASE("solve") {
  Field f(11);
  std::mt19937_64 rng(3);
  Mat y = random_matrix(f, 4, 2, rng);
  SolveResult s = solve(Mat::identity(f, 4), y);
  CHECK(s.consistent);
  CHECK(s.unique);
  REQUIRE(s.x);
  CHECK(*s.x == y);

  // tall matrix with full column rank
  Mat a = random_matrix(f, 6, 3, rng);
  while (rank(a) < 3) a = random_matrix(f, 6, 3, rng);
  Mat x0 = random_matrix(f, 3, 2, rng);
  s = solve(a, matmul(a, x0));
  CHECK(s.consistent);
  CHECK(s.unique);
  CHECK(*s.x == x0);

  Mat z(f, 3, 3), nz(f, 3, 1);
  nz(1, 0) = Fe{1};
  s = solve(z, nz);
  CHECK_FALSE(s.consistent);
  CHECK_FALSE(s.x);

  // underdetermined: any returned solution must satisfy the system
  Mat w = random_matrix(f, 2, 5, rng);
  Mat rhs = matmul(w, random_matrix(f, 5, 1, rng));
  s = solve(w, rhs);
  CHECK(s.consistent);
  CHECK_FALSE(s.unique);
  CHECK(matmul(w, *s.x) == rhs);
}

TEST_CASE("independent columns and row spaces") {
  Field f(7);
  Mat a{f, {{1, 2, 0, 1}, {0, 0, 1, 1}}};
  CHECK(independent_columns(a) == std::vector<std::size_t>{0, 2});
  CHECK(row_space_contains(a, Mat{f, {{1, 2, 1, 2}}}));
  CHECK_FALSE(row_space_contains(a, Mat{f, {{0, 1, 0, 0}}}));
}

TEST_CASE("rank inequalities on random sweeps") {
  Field f(5);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 5, k = 1 + rng() % 5, c = 1 + rng() % 5;
    Mat a = random_matrix(f, r, k, rng);
    Mat b = random_matrix(f, k, c, rng);
    if (t % 3 == 0) b = matmul(b, Mat(f, c, c));  // force low rank sometimes
    CHECK(rank(matmul(a, b)) <= std::min(rank(a), rank(b)));
    CHECK(rank(a) == rank(transpose(a)));
  }
}

TEST_CASE("det, rank and inverse agree on every 2x2 and 3x3 over GF(3)") {
  Field f(3);
  for (std::size_t n : {2u, 3u}) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n * n; ++i) total *= 3;
    std::size_t mismatches = 0;
    for (std::size_t code = 0; code < total; ++code) {
      Mat a(f, n, n);
      std::size_t c = code;
      for (std::size_t i = 0; i < n * n; ++i, c /= 3) a(i / n, i % n) = Fe{static_cast<std::uint32_t>(c % 3)};
      const Fe d = det_by_permutations(a);
      const bool by_det = d != f.zero();
      const bool by_rank = rank(a) == n;
      bool by_inv = true;
      try {
        by_inv = matmul(a, inverse(a)) == Mat::identity(f, n);
      } catch (const SingularMatrixError&) {
        by_inv = false;
      }
      if (!(by_det == by_rank && by_rank == by_inv && det(a) == d)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("empty shapes") {
  Field f(7);
  Mat e(f, 0, 3);
  CHECK(rank(e) == 0);
  CHECK(matmul(Mat(f, 2, 0), Mat(f, 0, 3)).is_zero());
  CHECK(independent_columns(Mat(f, 3, 0)).empty());
}
