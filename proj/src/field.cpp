// SPDX-License-Identifier: Apache-2.0

#include "detsec/field.hpp"

#include <limits>
#include <string>

namespace detsec {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::uint64_t f = 3; f * f <= v; f += 2) {
    if (v % f == 0) return false;
  }
  return true;
}

std::uint32_t smallest_prime_gt(std::uint32_t n) {
  std::uint64_t c = static_cast<std::uint64_t>(n) + 1;
  while (!is_prime(c)) ++c;
  if (c > std::numeric_limits<std::uint32_t>::max()) {
    throw std::overflow_error("smallest_prime_gt: result exceeds 32 bits");
  }
  return static_cast<std::uint32_t>(c);
}

Field::Field(std::uint32_t q) : q_(q) {
  if (q >= (1u << 31)) {
    throw std::invalid_argument("field modulus must be below 2^31, got " + std::to_string(q));
  }
  if (!is_prime(q)) {
    throw std::invalid_argument("field modulus must be prime, got " + std::to_string(q));
  }
}

Fe Field::from_int(std::int64_t v) const noexcept {
  std::int64_t r = v % static_cast<std::int64_t>(q_);
  if (r < 0) r += q_;
  return Fe{static_cast<std::uint32_t>(r)};
}

Fe Field::pow(Fe a, std::uint64_t e) const noexcept {
  Fe result = one();
  Fe base = a;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Fe Field::inv(Fe a) const {
  if (a.value == 0) throw FieldError("inverse of zero in GF(" + std::to_string(q_) + ")");
  // Fermat: a^(q-2) = a^-1 for prime q.
  return pow(a, q_ - 2);
}

}  // namespace detsec
