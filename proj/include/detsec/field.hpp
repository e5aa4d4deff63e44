// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_FIELD_HPP
#define DETSEC_FIELD_HPP

#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace detsec {

/// An element of a prime field. Always holds the canonical residue in [0, q);
/// the modulus lives in the Field that produced it.
struct Fe {
  std::uint32_t value = 0;

  friend constexpr bool operator==(Fe, Fe) = default;
};

inline std::ostream& operator<<(std::ostream& os, Fe a) { return os << a.value; }

/// Thrown for arithmetic that has no answer in the field (inverse of zero).
class FieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::uint64_t v);

/// Least prime strictly greater than n. For n > 1 the result is below 2n.
std::uint32_t smallest_prime_gt(std::uint32_t n);

/// GF(q) for a prime q < 2^31.
///
/// The object is a small immutable value; copy it freely. All operations
/// take and return canonical residues.
class Field {
 public:
  /// Throws std::invalid_argument unless q is a prime below 2^31.
  explicit Field(std::uint32_t q);

  std::uint32_t q() const noexcept { return q_; }

  Fe zero() const noexcept { return Fe{0}; }
  Fe one() const noexcept { return Fe{1}; }

  /// Reduces an arbitrary signed integer into the field.
  Fe from_int(std::int64_t v) const noexcept;

  Fe add(Fe a, Fe b) const noexcept {
    std::uint32_t s = a.value + b.value;
    return Fe{s >= q_ ? s - q_ : s};
  }
  Fe sub(Fe a, Fe b) const noexcept {
    return Fe{a.value >= b.value ? a.value - b.value : a.value + q_ - b.value};
  }
  Fe neg(Fe a) const noexcept { return Fe{a.value == 0 ? 0 : q_ - a.value}; }
  Fe mul(Fe a, Fe b) const noexcept {
    return Fe{static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(a.value) * b.value % q_)};
  }
  Fe pow(Fe a, std::uint64_t e) const noexcept;
  /// Throws FieldError for a == 0.
  Fe inv(Fe a) const;
  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

  /// (-1)^k as a field element.
  Fe sign(long k) const noexcept { return (k % 2 == 0) ? one() : neg(one()); }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint32_t q_;
};

}  // namespace detsec

#endif  // DETSEC_FIELD_HPP
