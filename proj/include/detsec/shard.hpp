// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_SHARD_HPP
#define DETSEC_SHARD_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "detsec/field.hpp"

namespace detsec {

class ShardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// On-disk layout, all integers little-endian:
//   0   "DETC"
//   4   u32 version (1)
//   8   u32 scheme tag (0 plain, 1 type1, 2 type2)
//   12  u32 q
//   16  u32 n
//   20  u32 d
//   24  u32 m
//   28  u32 ell
//   32  u32 node id
//   36  u32 payload symbol count
//   40  u32 rng seed present (0 or 1)
//   44  u32 original file length in bytes
//   48  u32 padding symbols in the last stripe
//   52  payload, one u16 per symbol
struct ShardHeader {
  std::uint32_t version = 1;
  std::uint32_t scheme = 0;
  std::uint32_t q = 0;
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint32_t m = 0;
  std::uint32_t ell = 0;
  std::uint32_t node_id = 0;
  std::uint32_t payload_symbols = 0;
  std::uint32_t seed_present = 0;
  std::uint32_t file_length = 0;
  std::uint32_t padding = 0;

  /// Equal in every field except node_id.
  bool same_stripe_set(const ShardHeader& o) const;
};

inline constexpr std::size_t kShardHeaderSize = 52;
inline constexpr std::uint32_t kShardVersion = 1;

struct Shard {
  ShardHeader header;
  std::vector<Fe> payload;
};

std::vector<std::uint8_t> serialize_shard(const Shard& s);
/// Throws ShardError on a bad magic, version or payload length.
Shard parse_shard(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& p);
/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes);

Shard read_shard(const std::filesystem::path& p);
void write_shard(const std::filesystem::path& p, const Shard& s);

/// Bits per packed symbol: floor(log2 q).
unsigned symbol_bits(std::uint32_t q);
/// Splits bytes into w-bit symbols, least significant bit first; the tail is zero-padded.
std::vector<Fe> pack_bytes(const std::vector<std::uint8_t>& bytes, unsigned w);
/// Inverse of pack_bytes, keeping the first `length` bytes.
std::vector<std::uint8_t> unpack_bytes(const std::vector<Fe>& symbols, unsigned w, std::size_t length);

}  // namespace detsec

#endif  // DETSEC_SHARD_HPP
