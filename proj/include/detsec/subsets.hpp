// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_SUBSETS_HPP
#define DETSEC_SUBSETS_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace detsec {

// Indexing convention used across the library: subset elements, node ids and
// message-matrix row labels are 1-based, matching the usual mathematical
// notation [d] = {1, ..., d}. Positions inside a Mat are 0-based. Row label x
// lives at Mat row x - 1; column label I lives at Mat column LexIndexer::rank(I).

/// Binomial coefficient with C(b, a) = 0 whenever a < 0 or a > b.
/// Throws std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binom(long b, long a);

/// A finite set of positive integers stored as a strictly increasing sequence.
class Subset {
 public:
  Subset() = default;
  Subset(std::initializer_list<int> elems);
  /// Throws std::invalid_argument unless `elems` is strictly increasing and positive.
  explicit Subset(std::vector<int> elems);

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  const std::vector<int>& elems() const noexcept { return elems_; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  int operator[](std::size_t i) const { return elems_[i]; }

  bool contains(int x) const noexcept;
  /// Throws std::logic_error on an empty set.
  int min() const;
  int max() const;

  Subset with(int x) const;
  Subset without(int x) const;
  /// True when every element lies in [lo, hi].
  bool within(int lo, int hi) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<int> elems_;
};

inline std::ostream& operator<<(std::ostream& os, const Subset& s) { return os << s.to_string(); }

/// Number of elements y of I with y <= x.
int ind(const Subset& I, int x) noexcept;

/// I ≺ J: min(I \ J) < min(J \ I). Requires |I| == |J| (std::invalid_argument otherwise).
bool lex_less(const Subset& I, const Subset& J);

/// All m-subsets of [d] in lexicographic order. Empty result when m > d.
std::vector<Subset> subsets_of(int d, int m);

/// Bijection between the m-subsets of [d] and [0, C(d, m)) that follows the
/// lexicographic order. Ranking uses the combinatorial number system, so no
/// enumeration table is held.
class LexIndexer {
 public:
  LexIndexer(int d, int m);

  int d() const noexcept { return d_; }
  int m() const noexcept { return m_; }
  std::size_t count() const noexcept { return count_; }

  /// Throws std::invalid_argument if I is not an m-subset of [d].
  std::size_t rank(const Subset& I) const;
  /// Throws std::out_of_range for i >= count().
  Subset unrank(std::size_t i) const;

 private:
  int d_;
  int m_;
  std::size_t count_;
};

}  // namespace detsec

#endif  // DETSEC_SUBSETS_HPP
