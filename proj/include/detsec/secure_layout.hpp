// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_SECURE_LAYOUT_HPP
#define DETSEC_SECURE_LAYOUT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsec/detcode.hpp"

namespace detsec {

enum class Scheme { Plain, TypeI, TypeII };

/// "plain", "type1", "type2".
std::string_view scheme_name(Scheme s) noexcept;
/// Inverse of scheme_name; throws std::invalid_argument on anything else.
Scheme parse_scheme(std::string_view name);

enum class CellRole { Secret, Key, Parity };

struct CellAssignment {
  CellRole role;
  std::size_t slot;  // index into the secret or key vector; unused for Parity
};

/// Placement of secrets and keys in the d x alpha message matrix.
///
/// Plain: every V/W cell holds a secret (ell must be 0).
/// TypeI: V/W cells in rows 1..ell hold keys, the rest hold secrets.
/// TypeII: V/W cells in block D (rows ell+1..d, columns inside [ell+1, d]) hold
///         secrets, every other V/W cell holds a key.
/// Slots are numbered in the same row-major scan as the plain fill order.
class SecureLayout {
 public:
  /// Throws std::invalid_argument when ell is out of range for the scheme:
  /// Plain needs ell = 0, TypeI needs 0 <= ell < d, TypeII needs 0 <= ell <= d.
  SecureLayout(const SystemParams& p, Scheme scheme, int ell);

  const SystemParams& params() const noexcept { return params_; }
  Scheme scheme() const noexcept { return scheme_; }
  int ell() const noexcept { return ell_; }

  std::size_t secret_count() const noexcept { return secret_cells_.size(); }
  std::size_t key_count() const noexcept { return key_cells_.size(); }

  const CellAssignment& role(int x, std::size_t col) const;
  const std::vector<Cell>& secret_cells() const noexcept { return secret_cells_; }
  const std::vector<Cell>& key_cells() const noexcept { return key_cells_; }

  /// True when (x, col) lies in block D. Only meaningful for TypeII.
  bool in_block_d(int x, std::size_t col) const;

  /// Set for TypeII when m > d - ell: the layout stores no secrets at all.
  const std::optional<std::string>& warning() const noexcept { return warning_; }

 private:
  SystemParams params_;
  Scheme scheme_;
  int ell_;
  std::size_t alpha_;
  std::vector<CellAssignment> roles_;
  std::vector<Cell> secret_cells_;
  std::vector<Cell> key_cells_;
  std::optional<std::string> warning_;
};

/// Closed-form secret count F_s for the scheme.
std::size_t secret_capacity(int d, int m, int ell, Scheme scheme);
/// Closed-form key count |Q| for the scheme.
std::size_t key_capacity(int d, int m, int ell, Scheme scheme);

/// Places secrets and keys, then closes every parity group.
Mat assemble(const SecureLayout& layout, std::span<const Fe> secrets, std::span<const Fe> keys);

std::vector<Fe> extract_secrets(const SecureLayout& layout, const Mat& M);
std::vector<Fe> extract_keys(const SecureLayout& layout, const Mat& M);

/// TypeII: every parity cell inside D has all its group partners among the
/// secret cells of D. Always true for other schemes.
bool block_d_parity_closed(const SecureLayout& layout);

/// Deterministic uniform stream over GF(q): splitmix64 in counter mode with
/// rejection sampling. `stream` selects an independent substream (one per stripe).
std::vector<Fe> sample_keys(const Field& field, std::size_t count, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace detsec

#endif  // DETSEC_SECURE_LAYOUT_HPP
