// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "detsec/leakage.hpp"
#include "detsec/secure_layout.hpp"
#include "test_util.hpp"

using namespace detsec;
using detsec::testing::random_vector;

namespace {

// Expected generator row: coefficients on secret slots and key slots (0-based).
struct Expr {
  std::map<std::size_t, int> secret;
  std::map<std::size_t, int> key;
};

bool row_is(const SecureLayout& lay, const Mat& G, int x, const Subset& I, const Expr& e) {
  const Field& f = lay.params().field;
  const std::size_t r = static_cast<std::size_t>(x - 1) * lay.params().alpha() + lay.params().columns().rank(I);
  const std::size_t fs = lay.secret_count();
  for (std::size_t c = 0; c < G.cols(); ++c) {
    int want = 0;
    if (c < fs) {
      auto it = e.secret.find(c);
      if (it != e.secret.end()) want = it->second;
    } else {
      auto it = e.key.find(c - fs);
      if (it != e.key.end()) want = it->second;
    }
    if (G(r, c) != f.from_int(want)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(scheme_name(Scheme::TypeI) == "type1");
  CHECK(parse_scheme("type2") == Scheme::TypeII);
  CHECK(parse_scheme("plain") == Scheme::Plain);
  CHECK_THROWS_AS(parse_scheme("type3"), std::invalid_argument);
}

TEST_CASE("worked example counts at d=6, m=2, ell=2") {
  SystemParams p = SystemParams::make(8, 6, 2);
  SecureLayout t1(p, Scheme::TypeI, 2);
  CHECK(t1.secret_count() == 40);
  CHECK(t1.key_count() == 30);
  SecureLayout t2(p, Scheme::TypeII, 2);
  CHECK(t2.secret_count() == 20);
  CHECK(t2.key_count() == 50);
  SecureLayout plain(p, Scheme::Plain, 0);
  CHECK(plain.secret_count() == 70);
  CHECK(plain.key_count() == 0);
  SecureLayout t1z(p, Scheme::TypeI, 0);
  CHECK(t1z.key_count() == 0);
  CHECK(secret_capacity(6, 2, 2, Scheme::TypeI) == 40);
  CHECK(key_capacity(6, 2, 2, Scheme::TypeII) == 50);
}

TEST_CASE("ell range checks") {
  SystemParams p = SystemParams::make(8, 6, 2);
  CHECK_THROWS_AS(SecureLayout(p, Scheme::Plain, 1), std::invalid_argument);
  CHECK_THROWS_AS(SecureLayout(p, Scheme::TypeI, 6), std::invalid_argument);
  CHECK_THROWS_AS(SecureLayout(p, Scheme::TypeI, -1), std::invalid_argument);
  CHECK_THROWS_AS(SecureLayout(p, Scheme::TypeII, 7), std::invalid_argument);
  CHECK_NOTHROW(SecureLayout(p, Scheme::TypeII, 6));
  SecureLayout over(p, Scheme::TypeII, 5);
  CHECK(over.warning());
  CHECK(over.secret_count() == 0);
  CHECK_FALSE(SecureLayout(p, Scheme::TypeII, 4).warning());
}

TEST_CASE("type1 example symbols") {
  // Keys r1..r30 fill rows 1-2, secrets u1..u40 fill rows 3-6, both row-major.
  SystemParams p = SystemParams::make(8, 6, 2);
  SecureLayout lay(p, Scheme::TypeI, 2);
  Mat G = message_generator(lay);
  CHECK(G.rows() == 90);
  CHECK(G.cols() == 70);
  // N_i({1,2}) = psi1 r1 + psi2 r16 + psi3 (r17 - r6) + psi4 (r18 - r7) + psi5 (r19 - r8) + psi6 (r20 - r9)
  Subset c12{1, 2};
  CHECK(row_is(lay, G, 1, c12, {{}, {{0, 1}}}));
  CHECK(row_is(lay, G, 2, c12, {{}, {{15, 1}}}));
  CHECK(row_is(lay, G, 3, c12, {{}, {{16, 1}, {5, -1}}}));
  CHECK(row_is(lay, G, 4, c12, {{}, {{17, 1}, {6, -1}}}));
  CHECK(row_is(lay, G, 5, c12, {{}, {{18, 1}, {7, -1}}}));
  CHECK(row_is(lay, G, 6, c12, {{}, {{19, 1}, {8, -1}}}));
  // N_i({1,3}) = psi1 r2 + psi2 r17 + psi3 u1 + psi4 (u2 - r10) + psi5 (u3 - r11) + psi6 (u4 - r12)
  Subset c13{1, 3};
  CHECK(row_is(lay, G, 1, c13, {{}, {{1, 1}}}));
  CHECK(row_is(lay, G, 2, c13, {{}, {{16, 1}}}));
  CHECK(row_is(lay, G, 3, c13, {{{0, 1}}, {}}));
  CHECK(row_is(lay, G, 4, c13, {{{1, 1}}, {{9, -1}}}));
  CHECK(row_is(lay, G, 5, c13, {{{2, 1}}, {{10, -1}}}));
  CHECK(row_is(lay, G, 6, c13, {{{3, 1}}, {{11, -1}}}));
}

TEST_CASE("type2 example symbol M(6,{2,5}) = -r30 + r48") {
  SystemParams p = SystemParams::make(8, 6, 2);
  SecureLayout lay(p, Scheme::TypeII, 2);
  Mat G = message_generator(lay);
  CHECK(row_is(lay, G, 6, Subset{2, 5}, {{}, {{29, -1}, {47, 1}}}));
  // secrets sit only in rows 3..6 and columns inside {3..6}
  for (const Cell& c : lay.secret_cells()) {
    CHECK(c.x >= 3);
    CHECK(p.columns().unrank(c.col).within(3, 6));
    CHECK(lay.in_block_d(c.x, c.col));
  }
}

TEST_CASE("capacity identities, d <= 10") {
  for (int d = 1; d <= 10; ++d)
    for (int m = 1; m <= d; ++m) {
      SystemParams p = SystemParams::make(d + 1, d, m);
      const std::size_t F = p.file_size();
      for (int ell = 0; ell <= d; ++ell) {
        for (Scheme s : {Scheme::TypeI, Scheme::TypeII}) {
          if (s == Scheme::TypeI && ell >= d) continue;
          SecureLayout lay(p, s, ell);
          CHECK(lay.secret_count() + lay.key_count() == F);
          CHECK(lay.secret_count() == secret_capacity(d, m, ell, s));
          CHECK(lay.key_count() == key_capacity(d, m, ell, s));
          CHECK(block_d_parity_closed(lay));
        }
        if (ell < d) {
          // keys in the top ell rows: ell*alpha - C(ell, m+1)
          SecureLayout lay(p, Scheme::TypeI, ell);
          CHECK(lay.key_count() == static_cast<std::size_t>(ell) * p.alpha() - binom(ell, m + 1));
          CHECK(secret_capacity(d, m, ell, Scheme::TypeII) <= secret_capacity(d, m, ell, Scheme::TypeI));
        }
      }
    }
}

TEST_CASE("D block parity only draws on D secrets") {
  for (int d = 2; d <= 7; ++d)
    for (int m = 1; m <= d; ++m)
      for (int ell = 0; ell <= d; ++ell) {
        SystemParams p = SystemParams::make(d + 1, d, m);
        SecureLayout lay(p, Scheme::TypeII, ell);
        for (const Cell& pc : parity_cells(d, m)) {
          if (!lay.in_block_d(pc.x, pc.col)) continue;
          Subset I = p.columns().unrank(pc.col);
          for (int y : I) {
            Subset src = I.with(pc.x).without(y);
            const std::size_t col = p.columns().rank(src);
            CHECK(lay.role(y, col).role == CellRole::Secret);
            CHECK(lay.in_block_d(y, col));
          }
        }
      }
}

TEST_CASE("assemble and extract") {
  std::mt19937_64 rng(9);
  SystemParams p = SystemParams::make(8, 6, 3);
  for (Scheme s : {Scheme::Plain, Scheme::TypeI, Scheme::TypeII}) {
    SecureLayout lay(p, s, s == Scheme::Plain ? 0 : 2);
    auto sec = random_vector(p.field, lay.secret_count(), rng);
    auto key = random_vector(p.field, lay.key_count(), rng);
    Mat M = assemble(lay, sec, key);
    CHECK(parity_holds(p, M));
    CHECK(extract_secrets(lay, M) == sec);
    CHECK(extract_keys(lay, M) == key);
    std::vector<Fe> zs(lay.secret_count()), zk(lay.key_count());
    Mat Z = assemble(lay, zs, zk);
    CHECK(Z.is_zero());
    CHECK(extract_secrets(lay, Z) == zs);
    CHECK(extract_keys(lay, Z) == zk);
    CHECK_THROWS_AS(assemble(lay, zk, zs), std::invalid_argument);
  }
}

TEST_CASE("plain layout matches the unsecured fill") {
  std::mt19937_64 rng(10);
  SystemParams p = SystemParams::make(7, 5, 2);
  SecureLayout lay(p, Scheme::Plain, 0);
  auto info = random_vector(p.field, p.file_size(), rng);
  CHECK(assemble(lay, info, {}) == build_message_matrix(p, info));
}

TEST_CASE("key sampling") {
  Field f(7);
  CHECK(sample_keys(f, 0, 1).empty());
  CHECK(sample_keys(f, 50, 42) == sample_keys(f, 50, 42));
  CHECK(sample_keys(f, 50, 42) != sample_keys(f, 50, 43));
  CHECK(sample_keys(f, 50, 42, 0) != sample_keys(f, 50, 42, 1));
  // a prefix of a longer draw is the shorter draw
  auto a = sample_keys(f, 10, 3), b = sample_keys(f, 20, 3);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));

  const std::size_t N = 100000;
  auto draws = sample_keys(f, N, 2024);
  std::vector<double> counts(7, 0.0);
  for (Fe v : draws) {
    REQUIRE(v.value < 7);
    counts[v.value] += 1;
  }
  const double mean = N / 7.0, sigma = std::sqrt(N * (1.0 / 7) * (6.0 / 7));
  double chi2 = 0;
  for (double c : counts) {
    CHECK(std::abs(c - mean) < 3 * sigma);
    chi2 += (c - mean) * (c - mean) / mean;
  }
  CHECK(chi2 < 22.46);  // 6 degrees of freedom, p = 0.001
}
