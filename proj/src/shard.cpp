// SPDX-License-Identifier: Apache-2.0

#include "detsec/shard.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

namespace detsec {

bool ShardHeader::same_stripe_set(const ShardHeader& o) const {
  return version == o.version && scheme == o.scheme && q == o.q && n == o.n && d == o.d && m == o.m && ell == o.ell &&
         payload_symbols == o.payload_symbols && seed_present == o.seed_present && file_length == o.file_length &&
         padding == o.padding;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[off + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

constexpr std::array<char, 4> kMagic = {'D', 'E', 'T', 'C'};

}  // namespace

std::vector<std::uint8_t> serialize_shard(const Shard& s) {
  const ShardHeader& h = s.header;
  if (h.payload_symbols != s.payload.size()) throw ShardError("shard payload length disagrees with header");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kShardHeaderSize + 2 * s.payload.size());
  for (std::uint32_t v : {h.version, h.scheme, h.q, h.n, h.d, h.m, h.ell, h.node_id, h.payload_symbols, h.seed_present,
                          h.file_length, h.padding}) {
    put_u32(out, v);
  }
  for (Fe v : s.payload) {
    if (v.value > 0xFFFF) throw ShardError("symbol does not fit in 16 bits");
    out.push_back(static_cast<std::uint8_t>(v.value & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v.value >> 8));
  }
  return out;
}

Shard parse_shard(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kShardHeaderSize || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ShardError("not a shard file (bad magic)");
  }
  Shard s;
  ShardHeader& h = s.header;
  std::uint32_t* fields[] = {&h.version, &h.scheme,          &h.q,            &h.n,           &h.d,          &h.m,
                             &h.ell,     &h.node_id,         &h.payload_symbols, &h.seed_present, &h.file_length, &h.padding};
  std::size_t off = 4;
  for (std::uint32_t* f : fields) {
    *f = get_u32(bytes, off);
    off += 4;
  }
  if (h.version != kShardVersion) throw ShardError("unsupported shard version " + std::to_string(h.version));
  if (bytes.size() != kShardHeaderSize + 2ull * h.payload_symbols) {
    throw ShardError("corrupted shard: payload is " + std::to_string(bytes.size() - kShardHeaderSize) +
                     " bytes, header promises " + std::to_string(2ull * h.payload_symbols));
  }
  s.payload.resize(h.payload_symbols);
  for (std::size_t i = 0; i < h.payload_symbols; ++i) {
    std::uint32_t v = bytes[off + 2 * i] | (static_cast<std::uint32_t>(bytes[off + 2 * i + 1]) << 8);
    if (v >= h.q) throw ShardError("corrupted shard: symbol " + std::to_string(v) + " outside GF(" + std::to_string(h.q) + ")");
    s.payload[i] = Fe{v};
  }
  return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

Shard read_shard(const std::filesystem::path& p) {
  try {
    return parse_shard(read_file(p));
  } catch (const ShardError& e) {
    throw ShardError(p.string() + ": " + e.what());
  }
}

void write_shard(const std::filesystem::path& p, const Shard& s) { write_file_atomic(p, serialize_shard(s)); }

unsigned symbol_bits(std::uint32_t q) {
  unsigned w = 0;
  while ((2ull << w) <= q) ++w;
  return w;
}

std::vector<Fe> pack_bytes(const std::vector<std::uint8_t>& bytes, unsigned w) {
  if (w == 0 || w > 16) throw std::invalid_argument("pack_bytes: symbol width must be in [1, 16]");
  const std::size_t total_bits = bytes.size() * 8;
  std::vector<Fe> out((total_bits + w - 1) / w);
  for (std::size_t bit = 0; bit < total_bits; ++bit) {
    if ((bytes[bit / 8] >> (bit % 8)) & 1u) out[bit / w].value |= 1u << (bit % w);
  }
  return out;
}

std::vector<std::uint8_t> unpack_bytes(const std::vector<Fe>& symbols, unsigned w, std::size_t length) {
  if (w == 0 || w > 16) throw std::invalid_argument("unpack_bytes: symbol width must be in [1, 16]");
  if (symbols.size() * w < length * 8) throw std::invalid_argument("unpack_bytes: not enough symbols");
  std::vector<std::uint8_t> out(length);
  for (std::size_t bit = 0; bit < length * 8; ++bit) {
    if ((symbols[bit / w].value >> (bit % w)) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
  }
  return out;
}

}  // namespace detsec
