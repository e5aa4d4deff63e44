// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "detsec/leakage.hpp"
#include "test_util.hpp"

using namespace detsec;
using detsec::testing::column;
using detsec::testing::node_sets;
using detsec::testing::random_vector;

namespace {

struct Instance {
  SystemParams p;
  SecureLayout lay;
  Mat psi;
  std::vector<Fe> secrets;
  std::vector<Fe> keys;
  Mat M;
  std::vector<NodeShare> shares;

  Instance(int n, int d, int m, Scheme s, int ell, std::mt19937_64& rng, bool zero = false)
      : p(SystemParams::make(n, d, m)), lay(p, s, ell), psi(build_encoder(p)),
        secrets(zero ? std::vector<Fe>(lay.secret_count()) : random_vector(p.field, lay.secret_count(), rng)),
        keys(zero ? std::vector<Fe>(lay.key_count()) : random_vector(p.field, lay.key_count(), rng)),
        M(assemble(lay, secrets, keys)), shares(encode(p, psi, M)) {}

  Mat contents(const std::vector<int>& L) const {
    Mat E(p.field, L.size(), p.alpha());
    for (std::size_t t = 0; t < L.size(); ++t)
      for (std::size_t c = 0; c < p.alpha(); ++c) E(t, c) = shares[static_cast<std::size_t>(L[t] - 1)].symbols[c];
    return E;
  }

  std::vector<RepairPacket> traffic(const std::vector<int>& L) const {
    std::vector<RepairPacket> out;
    for (int f : L) {
      Mat xi = build_repair_encoder(p, psi, f);
      for (const NodeShare& s : shares)
        if (s.node != f) out.push_back(repair_data(s, xi, f));
    }
    return out;
  }

  // M_S S + M_Q Q, flattened
  std::vector<Fe> materialize(const LinearObservation& obs) const {
    Mat y = add(matmul(obs.ms, column(p.field, secrets)), matmul(obs.mq, column(p.field, keys)));
    std::vector<Fe> out;
    for (std::size_t r = 0; r < y.rows(); ++r) out.push_back(y(r, 0));
    return out;
  }
};

}  // namespace

TEST_CASE("observation shapes") {
  std::mt19937_64 rng(11);
  Instance t(8, 6, 2, Scheme::TypeII, 2, rng);
  std::vector<int> none, one = {3}, two = {2, 5};
  CHECK(observe_type_i(t.lay, t.psi, none).ms.rows() == 0);
  CHECK(observe_type_ii(t.lay, t.psi, none).mq.rows() == 0);
  CHECK(observe_type_i(t.lay, t.psi, one).ms.rows() == 15);
  CHECK(observe_type_ii(t.lay, t.psi, two).ms.rows() == 2 * 7 * 6);
  CHECK(observe_type_ii(t.lay, t.psi, two).ms.cols() == 20);
  CHECK(observe_type_ii(t.lay, t.psi, two).mq.cols() == 50);
  std::vector<int> dup = {2, 2};
  CHECK_THROWS_AS(observe_type_i(t.lay, t.psi, dup), std::invalid_argument);
}

TEST_CASE("observations match what nodes actually see") {
  std::mt19937_64 rng(12);
  for (Scheme s : {Scheme::TypeI, Scheme::TypeII}) {
    Instance t(8, 6, 3, s, 2, rng);
    std::vector<int> L = {4, 7};
    std::vector<Fe> seen_i;
    for (int v : L) {
      const auto& sym = t.shares[static_cast<std::size_t>(v - 1)].symbols;
      seen_i.insert(seen_i.end(), sym.begin(), sym.end());
    }
    CHECK(t.materialize(observe_type_i(t.lay, t.psi, L)) == seen_i);
    std::vector<Fe> seen_ii;
    for (const RepairPacket& pk : t.traffic(L)) seen_ii.insert(seen_ii.end(), pk.payload.begin(), pk.payload.end());
    CHECK(t.materialize(observe_type_ii(t.lay, t.psi, L)) == seen_ii);
  }
}

TEST_CASE("repair traffic determines the stored contents") {
  std::mt19937_64 rng(13);
  for (int m = 1; m <= 4; ++m) {
    Instance t(7, 5, m, Scheme::TypeII, 2, rng);
    for (const auto& L : node_sets(7, 2)) {
      auto o1 = observe_type_i(t.lay, t.psi, L);
      auto o2 = observe_type_ii(t.lay, t.psi, L);
      CHECK(row_space_contains(hstack(o2.ms, o2.mq), hstack(o1.ms, o1.mq)));
    }
  }
}

TEST_CASE("rank measures on hand-made observations") {
  Field f(7);
  LinearObservation none{Mat(f, 0, 3), Mat(f, 0, 2), "empty"};
  CHECK(mutual_information(none) == 0);
  CHECK(observation_entropy(none) == 0);

  LinearObservation only_keys{Mat(f, 3, 2), Mat::identity(f, 3), "keys"};
  CHECK(mutual_information(only_keys) == 0);
  CHECK(keys_recoverable(only_keys));

  LinearObservation bare{Mat::identity(f, 4), Mat(f, 4, 0), "bare"};
  CHECK(mutual_information(bare) == 4);

  Mat mq{f, {{1, 0}, {3, 0}}};
  LinearObservation missing{Mat(f, 2, 1), mq, "missing"};
  CHECK_FALSE(keys_recoverable(missing));
}

TEST_CASE("worked example leakage, n=8, d=6, m=2, ell=2") {
  std::mt19937_64 rng(14);
  Instance t1(8, 6, 2, Scheme::TypeI, 2, rng);
  Instance t2(8, 6, 2, Scheme::TypeII, 2, rng);
  for (int size = 1; size <= 2; ++size)
    for (const auto& L : node_sets(8, size)) {
      auto o1 = observe_type_i(t1.lay, t1.psi, L);
      CHECK(mutual_information(o1) == 0);
      CHECK(observation_entropy(o1) <= 30);
      auto o2 = observe_type_ii(t2.lay, t2.psi, L);
      CHECK(mutual_information(o2) == 0);
      if (size == 2) {
        CHECK(keys_recoverable(o1));
        CHECK(keys_recoverable(o2));
        // m C(d+1, m+1) - m C(d-|L|+1, m+1) = 70 - 2 C(5,3)
        CHECK(observation_entropy(o2) == 50);
      }
    }
  // one more node than ell breaks secrecy
  std::vector<int> three = {1, 2, 3};
  CHECK(mutual_information(observe_type_i(t1.lay, t1.psi, three)) > 0);
}

TEST_CASE("type1 key decoder") {
  std::mt19937_64 rng(15);
  Instance t(8, 6, 2, Scheme::TypeI, 2, rng);
  auto order = decode_order_type_i(t.p);
  // column [d-m+1 : d] = {5,6} is decoded first
  CHECK(order.front() == t.p.columns().rank(Subset{5, 6}));
  CHECK(order.size() == t.p.alpha());
  for (const auto& L : node_sets(8, 2)) {
    CHECK(decode_keys_type_i(t.lay, t.psi, L, t.contents(L), t.secrets) == t.keys);
  }
  Instance z(8, 6, 2, Scheme::TypeI, 2, rng, true);
  std::vector<int> L = {1, 8};
  CHECK(decode_keys_type_i(z.lay, z.psi, L, z.contents(L), z.secrets) == z.keys);

  // wrong secrets do not decode silently
  std::vector<Fe> wrong = t.secrets;
  wrong[0] = t.p.field.add(wrong[0], Fe{1});
  Mat E = t.contents(L);
  bool rejected = false;
  try {
    rejected = decode_keys_type_i(t.lay, t.psi, L, E, wrong) != t.keys;
  } catch (const std::runtime_error&) {
    rejected = true;
  }
  CHECK(rejected);
}

TEST_CASE("type2 key decoder") {
  std::mt19937_64 rng(16);
  Instance t(8, 6, 2, Scheme::TypeII, 2, rng);
  for (const auto& L : node_sets(8, 2)) {
    TypeIIDecode out = decode_keys_type_ii(t.lay, t.psi, L, t.traffic(L), t.secrets);
    CHECK(out.keys == t.keys);
    CHECK(out.helpers.size() == 6);
    // the C-block solve uses exactly the columns <j, J> with J above j
    std::vector<std::size_t> want;
    LexIndexer cols = t.p.repair_columns();
    for (int j = 1; j <= 2; ++j)
      for (std::size_t c = 0; c < cols.count(); ++c) {
        Subset J = cols.unrank(c);
        if (J.empty() || J.min() > j) want.push_back(static_cast<std::size_t>(j - 1) * cols.count() + c);
      }
    CHECK(out.solve_columns == want);
  }
  Instance z(8, 6, 2, Scheme::TypeII, 2, rng, true);
  std::vector<int> L = {3, 6};
  CHECK(decode_keys_type_ii(z.lay, z.psi, L, z.traffic(L), z.secrets).keys == z.keys);

  auto packets = t.traffic(L);
  packets.pop_back();
  CHECK_THROWS(decode_keys_type_ii(t.lay, t.psi, L, packets, t.secrets));
}

TEST_CASE("top block of the stacked repair encoder") {
  SystemParams p = SystemParams::make(8, 6, 3);
  Mat psi = build_encoder(p);
  std::vector<int> L = {2, 5, 7};
  XiAudit audit;
  CHECK(xi_top_fullrank(p, psi, L, audit));
  CHECK(audit.expected_rank == 19);
  CHECK(audit.j_cols.size() == 19);
  CHECK(audit.top_rows.size() == 19);
  CHECK(audit.square_rank == 19);
  // the only row left out is {4,5,6}
  const std::size_t r456 = p.columns().rank(Subset{4, 5, 6});
  CHECK(std::find(audit.top_rows.begin(), audit.top_rows.end(), r456) == audit.top_rows.end());

  // 10 + 6 + 3 columns for j = 1, 2, 3
  std::size_t per_j[4] = {0, 0, 0, 0};
  for (const XiColumn& c : audit.j_labels) ++per_j[c.j];
  CHECK(per_j[1] == 10);
  CHECK(per_j[2] == 6);
  CHECK(per_j[3] == 3);

  SystemParams q = SystemParams::make(6, 5, 1);
  Mat ps = build_encoder(q);
  std::vector<int> all = {1, 2, 3, 4, 5};
  XiAudit a1;
  CHECK(xi_top_fullrank(q, ps, all, a1));
  CHECK(a1.top_rows.size() == 5);
  CHECK(a1.top_rank == 5);

  std::vector<int> rep = {1, 1};
  XiAudit bad;
  CHECK_THROWS_AS(xi_top_fullrank(p, psi, rep, bad), std::invalid_argument);
}

TEST_CASE("block triangular structure, d=6, m=3, ell=3") {
  SystemParams p = SystemParams::make(8, 6, 3);
  Mat psi = build_encoder(p);
  std::vector<int> L = {1, 4, 8};
  XiAudit audit;
  REQUIRE(xi_top_fullrank(p, psi, L, audit));
  TriangularReport rep = xi_block_triangularize(p, psi, audit);
  CHECK(rep.permuted.rows() == 19);
  CHECK(rep.permuted.cols() == 19);
  CHECK(rep.clean());
  CHECK(rank(rep.permuted) == 19);
  std::size_t total = 0;
  for (std::size_t g = 0; g < rep.group_sizes.size(); ++g) {
    const Subset& J = rep.group_keys[g];
    CHECK(rep.group_sizes[g] == static_cast<std::size_t>(std::min(J.min() - 1, 3)));
    total += rep.group_sizes[g];
  }
  CHECK(total == 19);
}

TEST_CASE("ell = 1 gives a plain lower-triangular block") {
  for (int d = 2; d <= 7; ++d)
    for (int m = 1; m <= d; ++m) {
      SystemParams p = SystemParams::make(d + 1, d, m);
      Mat psi = build_encoder(p);
      for (int node = 1; node <= d + 1; ++node) {
        std::vector<int> L = {node};
        XiAudit audit;
        CHECK(xi_top_fullrank(p, psi, L, audit));
        TriangularReport rep = xi_block_triangularize(p, psi, audit);
        CHECK(rep.clean());
        for (std::size_t g : rep.group_sizes) CHECK(g == 1);
        const Mat& T = rep.permuted;
        for (std::size_t r = 0; r < T.rows(); ++r) {
          CHECK(T(r, r) != Fe{0});
          for (std::size_t c = r + 1; c < T.cols(); ++c) CHECK(T(r, c) == Fe{0});
        }
      }
    }
}

TEST_CASE("group sizes add up, d <= 8") {
  for (int d = 1; d <= 8; ++d)
    for (int m = 1; m <= d; ++m) {
      SystemParams p = SystemParams::make(d + 1, d, m);
      Mat psi = build_encoder(p);
      for (int ell = 1; ell <= d; ++ell) {
        std::vector<int> L;
        for (int v = 0; v < ell; ++v) L.push_back(d + 1 - v);
        XiAudit audit;
        CHECK(xi_top_fullrank(p, psi, L, audit));
        TriangularReport rep = xi_block_triangularize(p, psi, audit);
        std::size_t total = 0;
        for (std::size_t g : rep.group_sizes) total += g;
        CHECK(total == binom(d, m) - binom(d - ell, m));
        CHECK(rep.clean());
      }
    }
}
