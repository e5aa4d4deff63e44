// SPDX-License-Identifier: Apache-2.0

#include "detsec/secure_layout.hpp"

#include <stdexcept>

namespace detsec {

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::Plain: return "plain";
    case Scheme::TypeI: return "type1";
    case Scheme::TypeII: return "type2";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "plain") return Scheme::Plain;
  if (name == "type1") return Scheme::TypeI;
  if (name == "type2") return Scheme::TypeII;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected plain, type1 or type2)");
}

SecureLayout::SecureLayout(const SystemParams& p, Scheme scheme, int ell)
    : params_(p), scheme_(scheme), ell_(ell), alpha_(p.alpha()) {
  const int d = p.d;
  switch (scheme) {
    case Scheme::Plain:
      if (ell != 0) throw std::invalid_argument("plain layout requires ell = 0");
      break;
    case Scheme::TypeI:
      if (ell < 0 || ell >= d) {
        throw std::invalid_argument("type1 layout requires 0 <= ell < d (ell=" + std::to_string(ell) + ")");
      }
      break;
    case Scheme::TypeII:
      if (ell < 0 || ell > d) {
        throw std::invalid_argument("type2 layout requires 0 <= ell <= d (ell=" + std::to_string(ell) + ")");
      }
      if (p.m > d - ell) {
        warning_ = "m=" + std::to_string(p.m) + " exceeds d-ell=" + std::to_string(d - ell) +
                   "; the layout carries keys only (no secret capacity)";
      }
      break;
  }

  roles_.assign(static_cast<std::size_t>(d) * alpha_, CellAssignment{CellRole::Parity, 0});
  for (const Cell& c : free_cells(d, p.m)) {
    bool secret = true;
    if (scheme == Scheme::TypeI) secret = c.x > ell;
    if (scheme == Scheme::TypeII) secret = in_block_d(c.x, c.col);
    auto& slot = roles_[static_cast<std::size_t>(c.x - 1) * alpha_ + c.col];
    if (secret) {
      slot = {CellRole::Secret, secret_cells_.size()};
      secret_cells_.push_back(c);
    } else {
      slot = {CellRole::Key, key_cells_.size()};
      key_cells_.push_back(c);
    }
  }
}

const CellAssignment& SecureLayout::role(int x, std::size_t col) const {
  return roles_.at(static_cast<std::size_t>(x - 1) * alpha_ + col);
}

bool SecureLayout::in_block_d(int x, std::size_t col) const {
  // Columns inside [ell+1, d] are exactly the last C(d-ell, m) in lex order.
  const std::size_t first_d_col = alpha_ - binom(params_.d - ell_, params_.m);
  return x > ell_ && col >= first_d_col;
}

std::size_t secret_capacity(int d, int m, int ell, Scheme scheme) {
  switch (scheme) {
    case Scheme::Plain:
      return static_cast<std::size_t>(m) * binom(d + 1, m + 1);
    case Scheme::TypeI: {
      auto v = static_cast<long long>(d - ell) * static_cast<long long>(binom(d, m)) -
               static_cast<long long>(binom(d, m + 1)) + static_cast<long long>(binom(ell, m + 1));
      return v < 0 ? 0 : static_cast<std::size_t>(v);
    }
    case Scheme::TypeII:
      return static_cast<std::size_t>(m) * binom(d - ell + 1, m + 1);
  }
  return 0;
}

std::size_t key_capacity(int d, int m, int ell, Scheme scheme) {
  switch (scheme) {
    case Scheme::Plain:
      return 0;
    case Scheme::TypeI:
      return static_cast<std::size_t>(ell) * binom(d, m) - binom(ell, m + 1);
    case Scheme::TypeII:
      return static_cast<std::size_t>(m) * binom(d + 1, m + 1) - static_cast<std::size_t>(m) * binom(d - ell + 1, m + 1);
  }
  return 0;
}

Mat assemble(const SecureLayout& layout, std::span<const Fe> secrets, std::span<const Fe> keys) {
  if (secrets.size() != layout.secret_count() || keys.size() != layout.key_count()) {
    throw std::invalid_argument("assemble: expected " + std::to_string(layout.secret_count()) + " secrets and " +
                                std::to_string(layout.key_count()) + " keys, got " + std::to_string(secrets.size()) +
                                " and " + std::to_string(keys.size()));
  }
  const SystemParams& p = layout.params();
  DraftMatrix draft(p);
  for (std::size_t i = 0; i < secrets.size(); ++i) draft.set(layout.secret_cells()[i].x, layout.secret_cells()[i].col, secrets[i]);
  for (std::size_t i = 0; i < keys.size(); ++i) draft.set(layout.key_cells()[i].x, layout.key_cells()[i].col, keys[i]);
  LexIndexer idx = p.columns();
  for (const Cell& c : parity_cells(p.d, p.m)) draft.set(c.x, c.col, parity_value(draft, c.x, idx.unrank(c.col)));
  return draft.finish();
}

namespace {

void check_shape(const SecureLayout& layout, const Mat& M) {
  const SystemParams& p = layout.params();
  if (!(M.field() == p.field) || M.rows() != static_cast<std::size_t>(p.d) || M.cols() != p.alpha()) {
    throw std::invalid_argument("message matrix does not match the layout parameters");
  }
}

}  // namespace

std::vector<Fe> extract_secrets(const SecureLayout& layout, const Mat& M) {
  check_shape(layout, M);
  std::vector<Fe> out;
  out.reserve(layout.secret_count());
  for (const Cell& c : layout.secret_cells()) out.push_back(M(static_cast<std::size_t>(c.x - 1), c.col));
  return out;
}

std::vector<Fe> extract_keys(const SecureLayout& layout, const Mat& M) {
  check_shape(layout, M);
  std::vector<Fe> out;
  out.reserve(layout.key_count());
  for (const Cell& c : layout.key_cells()) out.push_back(M(static_cast<std::size_t>(c.x - 1), c.col));
  return out;
}

bool block_d_parity_closed(const SecureLayout& layout) {
  if (layout.scheme() != Scheme::TypeII) return true;
  const SystemParams& p = layout.params();
  LexIndexer idx = p.columns();
  for (const Cell& c : parity_cells(p.d, p.m)) {
    if (!layout.in_block_d(c.x, c.col)) continue;
    Subset group = idx.unrank(c.col).with(c.x);
    for (int y : group) {
      if (y == c.x) continue;
      std::size_t col = idx.rank(group.without(y));
      if (!layout.in_block_d(y, col) || layout.role(y, col).role != CellRole::Secret) return false;
    }
  }
  return true;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<Fe> sample_keys(const Field& field, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t q = field.q();
  // Largest multiple of q that fits; draws at or above it are rejected to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % q);
  const std::uint64_t base = splitmix64(seed ^ splitmix64(stream));
  std::vector<Fe> out;
  out.reserve(count);
  std::uint64_t counter = 0;
  while (out.size() < count) {
    std::uint64_t r = splitmix64(base + counter++);
    if (r >= limit) continue;
    out.push_back(Fe{static_cast<std::uint32_t>(r % q)});
  }
  return out;
}

}  // namespace detsec
