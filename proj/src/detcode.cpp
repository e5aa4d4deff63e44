// SPDX-License-Identifier: Apache-2.0

#include "detsec/detcode.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace detsec {

SystemParams SystemParams::make(int n, int d, int m, std::optional<std::uint32_t> q) {
  if (m < 1 || m > d) {
    throw std::invalid_argument("mode m must satisfy 1 <= m <= d (m=" + std::to_string(m) +
                                ", d=" + std::to_string(d) + ")");
  }
  if (n < d) throw std::invalid_argument("need n >= d (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  std::uint32_t modulus = q ? *q : smallest_prime_gt(static_cast<std::uint32_t>(n));
  if (modulus <= static_cast<std::uint32_t>(n)) {
    throw std::invalid_argument("field size q=" + std::to_string(modulus) + " must exceed n=" + std::to_string(n));
  }
  return SystemParams{n, d, m, Field(modulus)};
}

CellType classify(int x, const Subset& I) {
  if (I.contains(x)) return CellType::V;
  return x < I.max() ? CellType::W : CellType::P;
}

std::vector<Cell> free_cells(int d, int m) {
  const auto cols = subsets_of(d, m);
  std::vector<Cell> out;
  for (int x = 1; x <= d; ++x) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (classify(x, cols[c]) != CellType::P) out.push_back({x, c});
    }
  }
  return out;
}

std::vector<Cell> parity_cells(int d, int m) {
  LexIndexer idx(d, m);
  std::vector<Cell> out;
  for (const Subset& J : subsets_of(d, m + 1)) {
    int x = J.max();
    out.push_back({x, idx.rank(J.without(x))});
  }
  return out;
}

DraftMatrix::DraftMatrix(const SystemParams& p)
    : params_(p), alpha_(p.alpha()), cells_(static_cast<std::size_t>(p.d) * alpha_) {}

std::optional<Fe> DraftMatrix::get(int x, std::size_t col) const {
  return cells_.at(static_cast<std::size_t>(x - 1) * alpha_ + col);
}

void DraftMatrix::set(int x, std::size_t col, Fe v) {
  cells_.at(static_cast<std::size_t>(x - 1) * alpha_ + col) = v;
}

Mat DraftMatrix::finish() const {
  Mat M(params_.field, static_cast<std::size_t>(params_.d), alpha_);
  for (std::size_t r = 0; r < M.rows(); ++r) {
    for (std::size_t c = 0; c < alpha_; ++c) {
      const auto& v = cells_[r * alpha_ + c];
      if (!v) throw std::logic_error("message matrix cell (" + std::to_string(r + 1) + "," + std::to_string(c) + ") unset");
      M(r, c) = *v;
    }
  }
  return M;
}

Fe parity_value(const DraftMatrix& draft, int x, const Subset& I) {
  if (I.empty() || x <= I.max()) {
    throw std::invalid_argument("parity_value: (" + std::to_string(x) + "," + I.to_string() + ") is not a P cell");
  }
  const SystemParams& p = draft.params();
  const Field& f = p.field;
  LexIndexer idx = p.columns();
  const Subset group = I.with(x);
  Fe acc = f.zero();
  for (int y : I) {
    Subset col = group.without(y);
    auto v = draft.get(y, idx.rank(col));
    if (!v) {
      throw std::logic_error("parity_value: source cell (" + std::to_string(y) + "," + col.to_string() + ") unset");
    }
    acc = f.add(acc, f.mul(f.sign(ind(I, y)), *v));
  }
  return f.mul(f.sign(p.m), acc);
}

Mat build_message_matrix(const SystemParams& p, std::span<const Fe> info) {
  if (info.size() != p.file_size()) {
    throw std::invalid_argument("build_message_matrix: expected " + std::to_string(p.file_size()) +
                                " symbols, got " + std::to_string(info.size()));
  }
  DraftMatrix draft(p);
  std::size_t next = 0;
  for (const Cell& c : free_cells(p.d, p.m)) draft.set(c.x, c.col, info[next++]);
  LexIndexer idx = p.columns();
  for (const Cell& c : parity_cells(p.d, p.m)) draft.set(c.x, c.col, parity_value(draft, c.x, idx.unrank(c.col)));
  return draft.finish();
}

bool parity_holds(const SystemParams& p, const Mat& M) {
  const Field& f = p.field;
  LexIndexer idx = p.columns();
  for (const Subset& J : subsets_of(p.d, p.m + 1)) {
    Fe acc = f.zero();
    for (int y : J) acc = f.add(acc, f.mul(f.sign(ind(J, y)), M(static_cast<std::size_t>(y - 1), idx.rank(J.without(y)))));
    if (acc.value != 0) return false;
  }
  return true;
}

Mat build_encoder(const SystemParams& p) {
  const Field& f = p.field;
  Mat psi(f, static_cast<std::size_t>(p.n), static_cast<std::size_t>(p.d));
  for (int i = 1; i <= p.n; ++i) {
    Fe xi = f.from_int(i);
    Fe v = f.one();
    for (int j = 1; j <= p.d; ++j) {
      psi(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = v;
      v = f.mul(v, xi);
    }
  }
  return psi;
}

std::vector<NodeShare> encode(const SystemParams& p, const Mat& psi, const Mat& M) {
  if (psi.rows() != static_cast<std::size_t>(p.n) || psi.cols() != static_cast<std::size_t>(p.d) ||
      M.rows() != static_cast<std::size_t>(p.d) || M.cols() != p.alpha()) {
    throw std::invalid_argument("encode: dimension mismatch");
  }
  Mat C = matmul(psi, M);
  std::vector<NodeShare> out;
  out.reserve(C.rows());
  for (std::size_t i = 0; i < C.rows(); ++i) {
    auto r = C.row(i);
    out.push_back({static_cast<int>(i + 1), std::vector<Fe>(r.begin(), r.end())});
  }
  return out;
}

namespace {

void check_node(const SystemParams& p, int node, const char* what) {
  if (node < 1 || node > p.n) {
    throw std::invalid_argument(std::string(what) + ": node " + std::to_string(node) + " outside [1," +
                                std::to_string(p.n) + "]");
  }
}

Mat rows_of(const Field& f, std::size_t width, std::span<const std::vector<Fe>> rows) {
  Mat out(f, rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) throw std::invalid_argument("row length mismatch");
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

Mat recover_data(const SystemParams& p, const Mat& psi, std::span<const NodeShare> shares) {
  if (shares.size() != static_cast<std::size_t>(p.d)) {
    throw std::invalid_argument("recover_data: need exactly " + std::to_string(p.d) + " shares, got " +
                                std::to_string(shares.size()));
  }
  std::set<int> seen;
  std::vector<std::size_t> rows;
  std::vector<std::vector<Fe>> content;
  for (const NodeShare& s : shares) {
    check_node(p, s.node, "recover_data");
    if (!seen.insert(s.node).second) throw std::invalid_argument("recover_data: duplicate node " + std::to_string(s.node));
    rows.push_back(static_cast<std::size_t>(s.node - 1));
    content.push_back(s.symbols);
  }
  std::vector<std::size_t> all(static_cast<std::size_t>(p.d));
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  Mat psi_k = submatrix(psi, rows, all);
  return matmul(inverse(psi_k), rows_of(p.field, p.alpha(), content));
}

Mat build_repair_encoder(const SystemParams& p, const Mat& psi, int f) {
  check_node(p, f, "build_repair_encoder");
  const Field& fld = p.field;
  LexIndexer rows = p.columns();
  LexIndexer cols = p.repair_columns();
  Mat xi(fld, rows.count(), cols.count());
  for (std::size_t r = 0; r < rows.count(); ++r) {
    Subset I = rows.unrank(r);
    for (int x : I) {
      Fe v = fld.mul(fld.sign(ind(I, x)), psi(static_cast<std::size_t>(f - 1), static_cast<std::size_t>(x - 1)));
      xi(r, cols.rank(I.without(x))) = v;
    }
  }
  return xi;
}

RepairPacket repair_data(const NodeShare& helper, const Mat& xi_f, int f) {
  if (helper.node == f) throw std::invalid_argument("repair_data: node " + std::to_string(f) + " cannot help itself");
  if (helper.symbols.size() != xi_f.rows()) throw std::invalid_argument("repair_data: share length mismatch");
  Mat n(xi_f.field(), 1, xi_f.rows());
  std::copy(helper.symbols.begin(), helper.symbols.end(), n.row(0).begin());
  Mat r = matmul(n, xi_f);
  return {helper.node, f, std::vector<Fe>(r.row(0).begin(), r.row(0).end())};
}

NodeShare repair_node(const SystemParams& p, const Mat& psi, int f, std::span<const RepairPacket> packets) {
  check_node(p, f, "repair_node");
  if (packets.size() != static_cast<std::size_t>(p.d)) {
    throw std::invalid_argument("repair_node: need exactly " + std::to_string(p.d) + " helpers, got " +
                                std::to_string(packets.size()));
  }
  std::set<int> seen;
  std::vector<std::size_t> rows;
  std::vector<std::vector<Fe>> payloads;
  for (const RepairPacket& pk : packets) {
    check_node(p, pk.helper, "repair_node");
    if (pk.failed != f) throw std::invalid_argument("repair_node: packet targets node " + std::to_string(pk.failed));
    if (pk.helper == f) throw std::invalid_argument("repair_node: failed node listed as helper");
    if (!seen.insert(pk.helper).second) throw std::invalid_argument("repair_node: duplicate helper " + std::to_string(pk.helper));
    rows.push_back(static_cast<std::size_t>(pk.helper - 1));
    payloads.push_back(pk.payload);
  }
  LexIndexer cols = p.columns();
  LexIndexer rcols = p.repair_columns();
  std::vector<std::size_t> all(static_cast<std::size_t>(p.d));
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  // R^f = M * Xi^f, row x holds the repair-space image of message row x.
  Mat rf = matmul(inverse(submatrix(psi, rows, all)), rows_of(p.field, rcols.count(), payloads));
  const Field& fld = p.field;
  NodeShare out{f, std::vector<Fe>(cols.count())};
  for (std::size_t c = 0; c < cols.count(); ++c) {
    Subset I = cols.unrank(c);
    Fe acc = fld.zero();
    for (int x : I) {
      acc = fld.add(acc, fld.mul(fld.sign(ind(I, x)), rf(static_cast<std::size_t>(x - 1), rcols.rank(I.without(x)))));
    }
    out.symbols[c] = acc;
  }
  return out;
}

std::size_t multi_repair_rank(const SystemParams& p, const Mat& psi, std::span<const int> failed) {
  Mat stacked(p.field, p.alpha(), 0);
  for (int f : failed) stacked = hstack(stacked, build_repair_encoder(p, psi, f));
  return rank(stacked);
}

RepairBasis::RepairBasis(const SystemParams& p, const Mat& psi, int f) : coeffs_(p.field, 0, 0) {
  Mat xi = build_repair_encoder(p, psi, f);
  cols_ = independent_columns(xi);
  std::vector<std::size_t> all_rows(xi.rows());
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
  SolveResult s = solve(submatrix(xi, all_rows, cols_), xi);
  if (!s.consistent || !s.unique) throw std::logic_error("RepairBasis: column basis does not span Xi");
  coeffs_ = *s.x;
}

std::vector<Fe> RepairBasis::compress(std::span<const Fe> payload) const {
  if (payload.size() != coeffs_.cols()) throw std::invalid_argument("RepairBasis::compress: payload length mismatch");
  std::vector<Fe> out;
  out.reserve(cols_.size());
  for (std::size_t c : cols_) out.push_back(payload[c]);
  return out;
}

std::vector<Fe> RepairBasis::expand(std::span<const Fe> compressed) const {
  if (compressed.size() != cols_.size()) throw std::invalid_argument("RepairBasis::expand: length mismatch");
  Mat c(coeffs_.field(), 1, compressed.size());
  std::copy(compressed.begin(), compressed.end(), c.row(0).begin());
  Mat full = matmul(c, coeffs_);
  return {full.row(0).begin(), full.row(0).end()};
}

}  // namespace detsec
