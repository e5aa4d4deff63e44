// SPDX-License-Identifier: Apache-2.0

#include "detsec/leakage.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace detsec {

namespace {

std::vector<std::size_t> iota_vec(std::size_t n, std::size_t from = 0) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), from);
  return v;
}

std::string set_string(std::span<const int> L) {
  std::string s = "{";
  for (std::size_t i = 0; i < L.size(); ++i) s += (i ? "," : "") + std::to_string(L[i]);
  return s + "}";
}

std::vector<int> sorted_distinct(const SystemParams& p, std::span<const int> L, const char* what) {
  std::vector<int> v(L.begin(), L.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw std::invalid_argument(std::string(what) + ": repeated node in " + set_string(L));
  }
  for (int x : v) {
    if (x < 1 || x > p.n) throw std::invalid_argument(std::string(what) + ": node " + std::to_string(x) + " out of range");
  }
  return v;
}

LinearObservation split(const SecureLayout& layout, const Mat& obs, std::string provenance) {
  const std::size_t fs = layout.secret_count();
  const std::size_t nq = layout.key_count();
  return {block(obs, 0, 0, obs.rows(), fs), block(obs, 0, fs, obs.rows(), nq), std::move(provenance)};
}

// rank(M_Q) and rank[M_Q | M_S] from one elimination: pivots are chosen left to
// right, so those landing in the M_Q block count rank(M_Q).
std::pair<std::size_t, std::size_t> ranks(const LinearObservation& obs) {
  auto piv = independent_columns(hstack(obs.mq, obs.ms));
  std::size_t rq = 0;
  for (std::size_t c : piv) {
    if (c < obs.mq.cols()) ++rq;
  }
  return {rq, piv.size()};
}

}  // namespace

Mat message_generator(const SecureLayout& layout) {
  const SystemParams& p = layout.params();
  const Field& f = p.field;
  const std::size_t alpha = p.alpha();
  const std::size_t fs = layout.secret_count();
  Mat G(f, static_cast<std::size_t>(p.d) * alpha, fs + layout.key_count());
  auto unit_col = [&](int x, std::size_t col) -> std::size_t {
    const CellAssignment& a = layout.role(x, col);
    if (a.role == CellRole::Parity) throw std::logic_error("parity cell used as a parity source");
    return a.role == CellRole::Secret ? a.slot : fs + a.slot;
  };
  for (const Cell& c : free_cells(p.d, p.m)) {
    G(static_cast<std::size_t>(c.x - 1) * alpha + c.col, unit_col(c.x, c.col)) = f.one();
  }
  LexIndexer idx = p.columns();
  for (const Cell& c : parity_cells(p.d, p.m)) {
    Subset I = idx.unrank(c.col);
    Subset group = I.with(c.x);
    auto row = G.row(static_cast<std::size_t>(c.x - 1) * alpha + c.col);
    for (int y : I) {
      Fe coef = f.mul(f.sign(p.m), f.sign(ind(I, y)));
      std::size_t k = unit_col(y, idx.rank(group.without(y)));
      row[k] = f.add(row[k], coef);
    }
  }
  return G;
}

LinearObservation observe_type_i(const SecureLayout& layout, const Mat& psi, std::span<const int> L) {
  const SystemParams& p = layout.params();
  auto nodes = sorted_distinct(p, L, "observe_type_i");
  const std::size_t alpha = p.alpha();
  Mat A(p.field, nodes.size() * alpha, static_cast<std::size_t>(p.d) * alpha);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    for (std::size_t c = 0; c < alpha; ++c) {
      for (int x = 1; x <= p.d; ++x) {
        A(t * alpha + c, static_cast<std::size_t>(x - 1) * alpha + c) =
            psi(static_cast<std::size_t>(nodes[t] - 1), static_cast<std::size_t>(x - 1));
      }
    }
  }
  return split(layout, matmul(A, message_generator(layout)), "type1 contents of " + set_string(nodes));
}

LinearObservation observe_type_ii(const SecureLayout& layout, const Mat& psi, std::span<const int> L) {
  const SystemParams& p = layout.params();
  const Field& f = p.field;
  auto nodes = sorted_distinct(p, L, "observe_type_ii");
  const std::size_t alpha = p.alpha();
  const std::size_t width = p.repair_columns().count();
  const std::size_t rows = nodes.size() * static_cast<std::size_t>(p.n - 1) * width;
  Mat A(f, rows, static_cast<std::size_t>(p.d) * alpha);
  std::size_t r = 0;
  for (int fail : nodes) {
    Mat xi = build_repair_encoder(p, psi, fail);
    for (int h = 1; h <= p.n; ++h) {
      if (h == fail) continue;
      for (std::size_t J = 0; J < width; ++J, ++r) {
        for (std::size_t I = 0; I < alpha; ++I) {
          Fe xv = xi(I, J);
          if (xv.value == 0) continue;
          for (int x = 1; x <= p.d; ++x) {
            A(r, static_cast<std::size_t>(x - 1) * alpha + I) =
                f.mul(psi(static_cast<std::size_t>(h - 1), static_cast<std::size_t>(x - 1)), xv);
          }
        }
      }
    }
  }
  return split(layout, matmul(A, message_generator(layout)), "type2 repair traffic into " + set_string(nodes));
}

std::size_t mutual_information(const LinearObservation& obs) {
  auto [rq, rall] = ranks(obs);
  return rall - rq;
}

std::size_t observation_entropy(const LinearObservation& obs) { return ranks(obs).second; }

bool keys_recoverable(const LinearObservation& obs) { return rank(obs.mq) == obs.mq.cols(); }

std::vector<std::size_t> decode_order_type_i(const SystemParams& p) {
  auto order = iota_vec(p.alpha());
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<Fe> decode_keys_type_i(const SecureLayout& layout, const Mat& psi, std::span<const int> L, const Mat& E,
                                   std::span<const Fe> secrets) {
  const SystemParams& p = layout.params();
  const Field& f = p.field;
  const int ell = layout.ell();
  if (layout.scheme() != Scheme::TypeI) throw std::invalid_argument("decode_keys_type_i: layout is not type1");
  if (L.size() != static_cast<std::size_t>(ell)) throw std::invalid_argument("decode_keys_type_i: need |L| = ell");
  sorted_distinct(p, L, "decode_keys_type_i");
  if (E.rows() != L.size() || E.cols() != p.alpha()) throw std::invalid_argument("decode_keys_type_i: E has wrong shape");
  if (secrets.size() != layout.secret_count()) throw std::invalid_argument("decode_keys_type_i: wrong secret count");

  std::vector<std::size_t> lrows;
  for (int x : L) lrows.push_back(static_cast<std::size_t>(x - 1));
  const auto top_cols = iota_vec(static_cast<std::size_t>(ell));
  const auto bottom_cols = iota_vec(static_cast<std::size_t>(p.d - ell), static_cast<std::size_t>(ell));
  const Mat top_inv = inverse(submatrix(psi, lrows, top_cols));
  const Mat psi_bottom = submatrix(psi, lrows, bottom_cols);

  LexIndexer idx = p.columns();
  DraftMatrix draft(p);
  std::vector<Cell> top_parity;
  for (std::size_t c : decode_order_type_i(p)) {
    Subset I = idx.unrank(c);
    Mat bottom(f, bottom_cols.size(), 1);
    for (int x = ell + 1; x <= p.d; ++x) {
      const CellAssignment& a = layout.role(x, c);
      // Parity sources sit in columns later in lex order, which are already decoded.
      Fe v = a.role == CellRole::Secret ? secrets[a.slot] : parity_value(draft, x, I);
      draft.set(x, c, v);
      bottom(static_cast<std::size_t>(x - ell - 1), 0) = v;
    }
    Mat rhs(f, L.size(), 1);
    for (std::size_t t = 0; t < L.size(); ++t) rhs(t, 0) = E(t, c);
    Mat top = matmul(top_inv, sub(rhs, matmul(psi_bottom, bottom)));
    for (int x = 1; x <= ell; ++x) {
      draft.set(x, c, top(static_cast<std::size_t>(x - 1), 0));
      if (layout.role(x, c).role == CellRole::Parity) top_parity.push_back({x, c});
    }
  }
  for (const Cell& c : top_parity) {
    if (parity_value(draft, c.x, idx.unrank(c.col)) != *draft.get(c.x, c.col)) {
      throw std::runtime_error("decode_keys_type_i: observation is inconsistent with the secrets");
    }
  }
  return extract_keys(layout, draft.finish());
}

namespace {

struct XiIndex {
  std::vector<std::size_t> top_rows;
  std::vector<std::size_t> j_cols;
  std::vector<XiColumn> j_labels;
};

XiIndex xi_index(const SystemParams& p, std::size_t ell) {
  XiIndex out;
  LexIndexer rows = p.columns();
  LexIndexer cols = p.repair_columns();
  for (std::size_t r = 0; r < rows.count(); ++r) {
    if (rows.unrank(r).min() <= static_cast<int>(ell)) out.top_rows.push_back(r);
  }
  for (std::size_t j = 1; j <= ell; ++j) {
    for (std::size_t c = 0; c < cols.count(); ++c) {
      Subset J = cols.unrank(c);
      if (J.empty() || J.min() > static_cast<int>(j)) {
        out.j_cols.push_back((j - 1) * cols.count() + c);
        out.j_labels.push_back({static_cast<int>(j), J});
      }
    }
  }
  return out;
}

Mat stacked_xi(const SystemParams& p, const Mat& psi, std::span<const int> nodes) {
  Mat out(p.field, p.alpha(), 0);
  for (int f : nodes) out = hstack(out, build_repair_encoder(p, psi, f));
  return out;
}

}  // namespace

TypeIIDecode decode_keys_type_ii(const SecureLayout& layout, const Mat& psi, std::span<const int> L,
                                 std::span<const RepairPacket> packets, std::span<const Fe> secrets) {
  const SystemParams& p = layout.params();
  const Field& f = p.field;
  const int ell = layout.ell();
  const std::size_t d = static_cast<std::size_t>(p.d);
  if (layout.scheme() != Scheme::TypeII) throw std::invalid_argument("decode_keys_type_ii: layout is not type2");
  if (L.size() != static_cast<std::size_t>(ell)) throw std::invalid_argument("decode_keys_type_ii: need |L| = ell");
  if (p.n < p.d + 1) throw std::invalid_argument("decode_keys_type_ii: needs n >= d + 1");
  if (secrets.size() != layout.secret_count()) throw std::invalid_argument("decode_keys_type_ii: wrong secret count");
  auto nodes = sorted_distinct(p, L, "decode_keys_type_ii");

  std::map<std::pair<int, int>, const RepairPacket*> by_pair;
  for (const RepairPacket& pk : packets) by_pair[{pk.helper, pk.failed}] = &pk;
  auto packet = [&](int h, int fail) -> const RepairPacket& {
    auto it = by_pair.find({h, fail});
    if (it == by_pair.end()) {
      throw std::invalid_argument("decode_keys_type_ii: missing packet " + std::to_string(h) + "->" + std::to_string(fail));
    }
    return *it->second;
  };

  // Rebuild the contents of every node in L from its own incoming traffic.
  std::map<int, NodeShare> rebuilt;
  for (int fail : nodes) {
    std::vector<RepairPacket> use;
    for (int h = 1; h <= p.n && use.size() < d; ++h) {
      if (h != fail) use.push_back(packet(h, fail));
    }
    rebuilt.emplace(fail, repair_node(p, psi, fail, use));
  }

  TypeIIDecode out;
  for (int h = 1; h <= p.n && out.helpers.size() < d; ++h) {
    if (!std::binary_search(nodes.begin(), nodes.end(), h)) out.helpers.push_back(h);
  }
  for (std::size_t t = 0; t < nodes.size() && out.helpers.size() < d; ++t) out.helpers.push_back(nodes[t]);

  const Mat xi_l = stacked_xi(p, psi, nodes);
  const std::size_t width = p.repair_columns().count();
  Mat X(f, d, xi_l.cols());
  for (std::size_t r = 0; r < d; ++r) {
    const int h = out.helpers[r];
    for (std::size_t t = 0; t < nodes.size(); ++t) {
      std::vector<Fe> payload;
      if (h == nodes[t]) {
        // No self-packet exists; the rebuilt content stands in for it.
        payload = repair_data(NodeShare{0, rebuilt.at(h).symbols}, build_repair_encoder(p, psi, h), h).payload;
      } else {
        payload = packet(h, nodes[t]).payload;
      }
      if (payload.size() != width) throw std::invalid_argument("decode_keys_type_ii: packet length mismatch");
      std::copy(payload.begin(), payload.end(), X.row(r).begin() + static_cast<std::ptrdiff_t>(t * width));
    }
  }
  std::vector<std::size_t> hrows;
  for (int h : out.helpers) hrows.push_back(static_cast<std::size_t>(h - 1));
  const auto all_d = iota_vec(d);
  const Mat Y = matmul(inverse(submatrix(psi, hrows, all_d)), X);  // = M * Xi^L

  // Block D from the secrets; its parity cells close inside D.
  const std::size_t alpha = p.alpha();
  const std::size_t nd = binom(p.d - ell, p.m);
  const std::size_t nleft = alpha - nd;
  const std::size_t nb = d - static_cast<std::size_t>(ell);
  LexIndexer idx = p.columns();
  DraftMatrix draft(p);
  for (const Cell& c : layout.secret_cells()) draft.set(c.x, c.col, secrets[layout.role(c.x, c.col).slot]);
  for (const Cell& c : parity_cells(p.d, p.m)) {
    if (layout.in_block_d(c.x, c.col)) draft.set(c.x, c.col, parity_value(draft, c.x, idx.unrank(c.col)));
  }
  Mat D(f, nb, nd);
  for (std::size_t r = 0; r < nb; ++r)
    for (std::size_t c = 0; c < nd; ++c) D(r, c) = *draft.get(ell + 1 + static_cast<int>(r), nleft + c);

  const XiIndex xidx = xi_index(p, static_cast<std::size_t>(ell));
  out.solve_columns = xidx.j_cols;
  const auto right_rows = iota_vec(nd, nleft);
  const auto all_xi_cols = iota_vec(xi_l.cols());
  const Mat xi_top = submatrix(xi_l, xidx.top_rows, all_xi_cols);
  const Mat xi_bottom = submatrix(xi_l, right_rows, all_xi_cols);
  const Mat Z = sub(block(Y, static_cast<std::size_t>(ell), 0, nb, Y.cols()), matmul(D, xi_bottom));  // = C * xi_top
  const auto nb_rows = iota_vec(nb);
  const Mat C = matmul(submatrix(Z, nb_rows, xidx.j_cols), inverse(submatrix(xi_top, iota_vec(nleft), xidx.j_cols)));
  if (!(matmul(C, xi_top) == Z)) throw std::runtime_error("decode_keys_type_ii: repair traffic is inconsistent with the secrets");

  // Top rows from the rebuilt contents of L.
  Mat E(f, nodes.size(), alpha);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const auto& s = rebuilt.at(nodes[t]).symbols;
    std::copy(s.begin(), s.end(), E.row(t).begin());
  }
  std::vector<std::size_t> lrows;
  for (int x : nodes) lrows.push_back(static_cast<std::size_t>(x - 1));
  const Mat top_inv = inverse(submatrix(psi, lrows, iota_vec(static_cast<std::size_t>(ell))));
  const Mat psi_bottom = submatrix(psi, lrows, iota_vec(nb, static_cast<std::size_t>(ell)));
  const Mat A = matmul(top_inv, sub(block(E, 0, 0, nodes.size(), nleft), matmul(psi_bottom, C)));
  const Mat B = matmul(top_inv, sub(block(E, 0, nleft, nodes.size(), nd), matmul(psi_bottom, D)));

  Mat M(f, d, alpha);
  for (std::size_t r = 0; r < static_cast<std::size_t>(ell); ++r) {
    for (std::size_t c = 0; c < nleft; ++c) M(r, c) = A(r, c);
    for (std::size_t c = 0; c < nd; ++c) M(r, nleft + c) = B(r, c);
  }
  for (std::size_t r = 0; r < nb; ++r) {
    for (std::size_t c = 0; c < nleft; ++c) M(ell + r, c) = C(r, c);
    for (std::size_t c = 0; c < nd; ++c) M(ell + r, nleft + c) = D(r, c);
  }
  if (!parity_holds(p, M)) throw std::runtime_error("decode_keys_type_ii: decoded matrix violates parity");
  auto shares = encode(p, psi, M);
  for (const RepairPacket& pk : packets) {
    Mat xi = build_repair_encoder(p, psi, pk.failed);
    if (repair_data(shares[static_cast<std::size_t>(pk.helper - 1)], xi, pk.failed).payload != pk.payload) {
      throw std::runtime_error("decode_keys_type_ii: decoded matrix does not reproduce the observed packets");
    }
  }
  out.keys = extract_keys(layout, M);
  return out;
}

bool xi_top_fullrank(const SystemParams& p, const Mat& psi, std::span<const int> L, XiAudit& audit) {
  auto nodes = sorted_distinct(p, L, "xi_top_fullrank");
  if (nodes.size() > static_cast<std::size_t>(p.d)) throw std::invalid_argument("xi_top_fullrank: |L| exceeds d");
  const XiIndex xidx = xi_index(p, nodes.size());
  audit.L = nodes;
  audit.xi_l = stacked_xi(p, psi, nodes);
  audit.top_rows = xidx.top_rows;
  audit.j_cols = xidx.j_cols;
  audit.j_labels = xidx.j_labels;
  audit.expected_rank = binom(p.d, p.m) - binom(p.d - static_cast<long>(nodes.size()), p.m);
  const auto all_cols = iota_vec(audit.xi_l.cols());
  audit.top_rank = rank(submatrix(audit.xi_l, audit.top_rows, all_cols));
  audit.square_rank = rank(submatrix(audit.xi_l, audit.top_rows, audit.j_cols));
  return audit.top_rows.size() == audit.expected_rank && audit.top_rank == audit.expected_rank &&
         audit.square_rank == audit.expected_rank;
}

TriangularReport xi_block_triangularize(const SystemParams& p, const Mat& psi, const XiAudit& audit) {
  const Field& f = p.field;
  LexIndexer rows = p.columns();
  LexIndexer cols = p.repair_columns();
  const int ell = static_cast<int>(audit.L.size());
  TriangularReport rep{Mat(f, 0, 0), {}, {}};

  // Order labels <j, J> by J (lex), then j. Rows {i} + J use the same labels with i = min.
  struct Label {
    int j;
    std::size_t jrank;
  };
  std::vector<Label> labels;
  for (const XiColumn& c : audit.j_labels) labels.push_back({c.j, cols.rank(c.J)});
  std::sort(labels.begin(), labels.end(),
            [](const Label& a, const Label& b) { return a.jrank != b.jrank ? a.jrank < b.jrank : a.j < b.j; });

  const std::size_t n = labels.size();
  std::vector<std::size_t> prow(n), pcol(n);
  for (std::size_t k = 0; k < n; ++k) {
    Subset J = cols.unrank(labels[k].jrank);
    prow[k] = rows.rank(J.with(labels[k].j));
    pcol[k] = static_cast<std::size_t>(labels[k].j - 1) * cols.count() + labels[k].jrank;
  }
  rep.permuted = submatrix(audit.xi_l, prow, pcol);

  std::vector<std::size_t> starts;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || labels[k].jrank != labels[k - 1].jrank) {
      starts.push_back(k);
      rep.group_keys.push_back(cols.unrank(labels[k].jrank));
    }
  }
  starts.push_back(n);
  std::size_t total = 0;
  rep.partition_ok = true;
  for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
    std::size_t size = starts[g + 1] - starts[g];
    rep.group_sizes.push_back(size);
    total += size;
    const Subset& J = rep.group_keys[g];
    int z = J.empty() ? ell : std::min(J.min() - 1, ell);
    if (size != static_cast<std::size_t>(z)) rep.partition_ok = false;
  }
  std::set<std::size_t> distinct(pcol.begin(), pcol.end());
  std::set<std::size_t> expected(audit.j_cols.begin(), audit.j_cols.end());
  rep.partition_ok = rep.partition_ok && total == audit.expected_rank && distinct == expected &&
                     std::set<std::size_t>(prow.begin(), prow.end()) ==
                         std::set<std::size_t>(audit.top_rows.begin(), audit.top_rows.end());

  rep.upper_zero = true;
  rep.diagonal_matches = true;
  rep.diagonal_full_rank = true;
  for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
    const std::size_t lo = starts[g];
    const std::size_t hi = starts[g + 1];
    for (std::size_t r = lo; r < hi; ++r) {
      for (std::size_t c = hi; c < n; ++c) {
        if (rep.permuted(r, c).value != 0) rep.upper_zero = false;
      }
      for (std::size_t c = lo; c < hi; ++c) {
        const int i = labels[r].j;
        const int q_j = audit.L[static_cast<std::size_t>(labels[c].j - 1)];
        Fe want = f.neg(psi(static_cast<std::size_t>(q_j - 1), static_cast<std::size_t>(i - 1)));
        if (rep.permuted(r, c) != want) rep.diagonal_matches = false;
      }
    }
    if (rank(block(rep.permuted, lo, lo, hi - lo, hi - lo)) != hi - lo) rep.diagonal_full_rank = false;
  }
  return rep;
}

}  // namespace detsec
