// SPDX-License-Identifier: Apache-2.0

#include "detsec/subsets.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace detsec {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t binom(long b, long a) {
  if (a < 0 || b < 0 || a > b) return 0;
  a = std::min(a, b - a);
  u128 r = 1;
  for (long i = 1; i <= a; ++i) {
    r = r * static_cast<unsigned>(b - a + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binom overflow");
    }
  }
  return static_cast<std::uint64_t>(r);
}

Subset::Subset(std::initializer_list<int> elems) : Subset(std::vector<int>(elems)) {}

Subset::Subset(std::vector<int> elems) : elems_(std::move(elems)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 1) throw std::invalid_argument("subset elements must be positive");
    if (i > 0 && elems_[i - 1] >= elems_[i]) {
      throw std::invalid_argument("subset elements must be strictly increasing");
    }
  }
}

bool Subset::contains(int x) const noexcept {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

int Subset::min() const {
  if (elems_.empty()) throw std::logic_error("min of empty subset");
  return elems_.front();
}

int Subset::max() const {
  if (elems_.empty()) throw std::logic_error("max of empty subset");
  return elems_.back();
}

Subset Subset::with(int x) const {
  if (contains(x)) return *this;
  std::vector<int> v = elems_;
  v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  return Subset(std::move(v));
}

Subset Subset::without(int x) const {
  std::vector<int> v;
  v.reserve(elems_.size());
  for (int e : elems_) {
    if (e != x) v.push_back(e);
  }
  Subset s;
  s.elems_ = std::move(v);
  return s;
}

bool Subset::within(int lo, int hi) const noexcept {
  return std::all_of(elems_.begin(), elems_.end(), [&](int e) { return e >= lo && e <= hi; });
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) os << ',';
    os << elems_[i];
  }
  os << '}';
  return os.str();
}

int ind(const Subset& I, int x) noexcept {
  return static_cast<int>(std::upper_bound(I.begin(), I.end(), x) - I.begin());
}

bool lex_less(const Subset& I, const Subset& J) {
  if (I.size() != J.size()) throw std::invalid_argument("lex_less: subsets of different sizes");
  // Smallest element in the symmetric difference decides; it belongs to I iff I ≺ J.
  auto a = I.begin();
  auto b = J.begin();
  constexpr int kNone = std::numeric_limits<int>::max();
  int min_i = kNone;
  int min_j = kNone;
  while (a != I.end() || b != J.end()) {
    if (b == J.end() || (a != I.end() && *a < *b)) {
      min_i = std::min(min_i, *a++);
    } else if (a == I.end() || *b < *a) {
      min_j = std::min(min_j, *b++);
    } else {
      ++a;
      ++b;
    }
  }
  return min_i < min_j;
}

std::vector<Subset> subsets_of(int d, int m) {
  std::vector<Subset> out;
  if (m < 0 || m > d) return out;
  std::vector<int> c(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.emplace_back(c);
    int i = m - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == d - m + i + 1) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

LexIndexer::LexIndexer(int d, int m) : d_(d), m_(m), count_(0) {
  if (d < 0 || m < 0 || m > d) throw std::invalid_argument("LexIndexer: need 0 <= m <= d");
  count_ = static_cast<std::size_t>(binom(d, m));
}

std::size_t LexIndexer::rank(const Subset& I) const {
  if (static_cast<int>(I.size()) != m_ || !I.within(1, d_)) {
    throw std::invalid_argument("LexIndexer::rank: " + I.to_string() + " is not an " +
                                std::to_string(m_) + "-subset of [" + std::to_string(d_) + "]");
  }
  // Count subsets that agree on the first i positions and have a smaller
  // element at position i.
  std::size_t r = 0;
  int prev = 0;
  for (int i = 0; i < m_; ++i) {
    for (int v = prev + 1; v < I[static_cast<std::size_t>(i)]; ++v) {
      r += static_cast<std::size_t>(binom(d_ - v, m_ - i - 1));
    }
    prev = I[static_cast<std::size_t>(i)];
  }
  return r;
}

Subset LexIndexer::unrank(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("LexIndexer::unrank: index out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m_));
  int v = 1;
  for (int pos = 0; pos < m_; ++pos) {
    while (true) {
      auto block = static_cast<std::size_t>(binom(d_ - v, m_ - pos - 1));
      if (i < block) break;
      i -= block;
      ++v;
    }
    out.push_back(v);
    ++v;
  }
  return Subset(std::move(out));
}

}  // namespace detsec
