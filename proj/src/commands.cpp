// SPDX-License-Identifier: Apache-2.0

#include "detsec/commands.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "detsec/detcode.hpp"
#include "detsec/leakage.hpp"
#include "detsec/shard.hpp"

namespace detsec {

namespace fs = std::filesystem;

std::filesystem::path shard_path(const std::filesystem::path& dir, int node) {
  return dir / ("node_" + std::to_string(node) + ".shard");
}

namespace {

constexpr std::uint32_t kMaxSymbolModulus = 65535;

std::uint32_t scheme_tag(Scheme s) {
  switch (s) {
    case Scheme::Plain: return 0;
    case Scheme::TypeI: return 1;
    case Scheme::TypeII: return 2;
  }
  return 0;
}

Scheme scheme_from_tag(std::uint32_t t) {
  switch (t) {
    case 0: return Scheme::Plain;
    case 1: return Scheme::TypeI;
    case 2: return Scheme::TypeII;
  }
  throw ShardError("unknown scheme tag " + std::to_string(t));
}

SystemParams params_of(const ShardHeader& h) {
  return SystemParams::make(static_cast<int>(h.n), static_cast<int>(h.d), static_cast<int>(h.m), h.q);
}

std::vector<std::size_t> range(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Loads shards, keeps the first occurrence of each node and checks that they
// belong to one encoding.
std::vector<Shard> load_consistent(const std::vector<fs::path>& paths) {
  std::vector<Shard> out;
  std::set<std::uint32_t> seen;
  for (const fs::path& p : paths) {
    Shard s = read_shard(p);
    if (!out.empty() && !s.header.same_stripe_set(out.front().header)) {
      throw ShardError(p.string() + ": header does not match " + paths.front().string());
    }
    const ShardHeader& h = s.header;
    if (h.node_id < 1 || h.node_id > h.n) throw ShardError(p.string() + ": node id out of range");
    if (seen.insert(h.node_id).second) out.push_back(std::move(s));
  }
  if (!out.empty()) {
    const ShardHeader& h = out.front().header;
    const std::size_t alpha = binom(h.d, h.m);
    if (alpha == 0 || h.payload_symbols % alpha != 0) throw ShardError("corrupted shard: payload is not a whole number of stripes");
  }
  return out;
}

}  // namespace

EncodeResult cmd_encode(const EncodeOptions& opt) {
  const SystemParams p = SystemParams::make(opt.n, opt.d, opt.m, opt.q);
  if (p.field.q() > kMaxSymbolModulus) throw std::invalid_argument("q must be below 2^16 for the shard format");
  const SecureLayout layout(p, opt.scheme, opt.ell);
  const std::size_t sps = layout.secret_count();
  if (sps == 0) throw std::invalid_argument("this scheme stores no data symbols at the given parameters");

  const std::vector<std::uint8_t> bytes = read_file(opt.input);
  if (bytes.size() > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("input larger than 4 GiB");
  const unsigned w = symbol_bits(p.field.q());
  std::vector<Fe> data = pack_bytes(bytes, w);
  const std::size_t stripes = std::max<std::size_t>(1, (data.size() + sps - 1) / sps);
  const std::size_t padding = stripes * sps - data.size();
  data.resize(stripes * sps);

  const bool seeded = opt.seed.has_value();
  std::uint64_t seed = 0;
  if (seeded) {
    seed = *opt.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }

  const std::size_t alpha = p.alpha();
  Mat all(p.field, static_cast<std::size_t>(p.d), stripes * alpha);
  for (std::size_t s = 0; s < stripes; ++s) {
    const std::vector<Fe> keys = sample_keys(p.field, layout.key_count(), seed, s);
    const Mat M = assemble(layout, std::span<const Fe>(data).subspan(s * sps, sps), keys);
    for (std::size_t r = 0; r < M.rows(); ++r)
      for (std::size_t c = 0; c < alpha; ++c) all(r, s * alpha + c) = M(r, c);
  }
  const Mat C = matmul(build_encoder(p), all);

  fs::create_directories(opt.out_dir);
  EncodeResult res{{}, stripes, sps, layout.warning()};
  for (int i = 1; i <= p.n; ++i) {
    Shard sh;
    sh.header.scheme = scheme_tag(opt.scheme);
    sh.header.q = p.field.q();
    sh.header.n = static_cast<std::uint32_t>(p.n);
    sh.header.d = static_cast<std::uint32_t>(p.d);
    sh.header.m = static_cast<std::uint32_t>(p.m);
    sh.header.ell = static_cast<std::uint32_t>(opt.ell);
    sh.header.node_id = static_cast<std::uint32_t>(i);
    sh.header.payload_symbols = static_cast<std::uint32_t>(C.cols());
    sh.header.seed_present = seeded ? 1 : 0;
    sh.header.file_length = static_cast<std::uint32_t>(bytes.size());
    sh.header.padding = static_cast<std::uint32_t>(padding);
    auto row = C.row(static_cast<std::size_t>(i - 1));
    sh.payload.assign(row.begin(), row.end());
    res.shards.push_back(shard_path(opt.out_dir, i));
    write_shard(res.shards.back(), sh);
  }
  return res;
}

void cmd_recover(const std::vector<fs::path>& paths, const fs::path& out) {
  std::vector<Shard> shards = load_consistent(paths);
  if (shards.empty()) throw std::runtime_error("insufficient shards: none given");
  const ShardHeader& h = shards.front().header;
  if (shards.size() < h.d) {
    throw std::runtime_error("insufficient shards: need " + std::to_string(h.d) + " distinct nodes, got " +
                             std::to_string(shards.size()));
  }
  std::vector<Shard> extra(std::make_move_iterator(shards.begin() + h.d), std::make_move_iterator(shards.end()));
  shards.resize(h.d);
  const SystemParams p = params_of(h);
  const SecureLayout layout(p, scheme_from_tag(h.scheme), static_cast<int>(h.ell));
  const std::size_t alpha = p.alpha();
  const std::size_t stripes = h.payload_symbols / alpha;

  std::vector<std::size_t> rows;
  Mat ck(p.field, shards.size(), h.payload_symbols);
  for (std::size_t t = 0; t < shards.size(); ++t) {
    rows.push_back(shards[t].header.node_id - 1);
    std::copy(shards[t].payload.begin(), shards[t].payload.end(), ck.row(t).begin());
  }
  const Mat psi = build_encoder(p);
  const Mat M = matmul(inverse(submatrix(psi, rows, range(static_cast<std::size_t>(p.d)))), ck);

  // Headers do not identify an encoding run, so check that the shards agree:
  // every stripe must close its parity groups and surplus shards must match.
  for (std::size_t s = 0; s < stripes; ++s) {
    if (!parity_holds(p, block(M, 0, s * alpha, M.rows(), alpha))) {
      throw ShardError("inconsistent shards: stripe " + std::to_string(s) + " fails its parity check");
    }
  }
  for (const Shard& sh : extra) {
    const std::size_t r = sh.header.node_id - 1;
    const Mat row = matmul(block(psi, r, 0, 1, psi.cols()), M);
    if (!std::equal(sh.payload.begin(), sh.payload.end(), row.row(0).begin())) {
      throw ShardError("inconsistent shards: node " + std::to_string(sh.header.node_id) +
                       " does not match the others");
    }
  }

  std::vector<Fe> data;
  data.reserve(stripes * layout.secret_count());
  for (std::size_t s = 0; s < stripes; ++s) {
    for (const Cell& c : layout.secret_cells()) data.push_back(M(static_cast<std::size_t>(c.x - 1), s * alpha + c.col));
  }
  if (h.padding > data.size()) throw ShardError("corrupted shard: padding exceeds payload");
  data.resize(data.size() - h.padding);
  const unsigned w = symbol_bits(p.field.q());
  if (data.size() * w < static_cast<std::size_t>(h.file_length) * 8) throw ShardError("corrupted shard: payload too short for file length");
  write_file_atomic(out, unpack_bytes(data, w, h.file_length));
}

RepairResult cmd_repair(int failed, const std::vector<fs::path>& paths, const fs::path& out) {
  std::vector<Shard> helpers = load_consistent(paths);
  if (helpers.size() != paths.size()) throw std::invalid_argument("repair: duplicate helper shards");
  if (helpers.empty()) throw std::invalid_argument("repair: no helpers given");
  const ShardHeader& h = helpers.front().header;
  if (helpers.size() != h.d) {
    throw std::invalid_argument("repair: need exactly " + std::to_string(h.d) + " helpers, got " +
                                std::to_string(helpers.size()));
  }
  if (failed < 1 || failed > static_cast<int>(h.n)) throw std::invalid_argument("repair: failed node out of range");
  for (const Shard& s : helpers) {
    if (static_cast<int>(s.header.node_id) == failed) throw std::invalid_argument("repair: failed node is among the helpers");
  }
  const SystemParams p = params_of(h);
  const Mat psi = build_encoder(p);
  const Mat xi = build_repair_encoder(p, psi, failed);
  const RepairBasis basis(p, psi, failed);
  const std::size_t alpha = p.alpha();
  const std::size_t stripes = h.payload_symbols / alpha;

  Shard rebuilt;
  rebuilt.header = h;
  rebuilt.header.node_id = static_cast<std::uint32_t>(failed);
  rebuilt.payload.reserve(h.payload_symbols);
  std::vector<RepairPacket> packets(helpers.size());
  for (std::size_t s = 0; s < stripes; ++s) {
    for (std::size_t t = 0; t < helpers.size(); ++t) {
      const auto& src = helpers[t].payload;
      NodeShare share{static_cast<int>(helpers[t].header.node_id),
                      std::vector<Fe>(src.begin() + static_cast<std::ptrdiff_t>(s * alpha),
                                      src.begin() + static_cast<std::ptrdiff_t>((s + 1) * alpha))};
      RepairPacket pk = repair_data(share, xi, failed);
      // Only beta symbols cross the network; the newcomer expands them.
      pk.payload = basis.expand(basis.compress(pk.payload));
      packets[t] = std::move(pk);
    }
    NodeShare node = repair_node(p, psi, failed, packets);
    rebuilt.payload.insert(rebuilt.payload.end(), node.symbols.begin(), node.symbols.end());
  }
  write_shard(out, rebuilt);
  return {stripes, p.beta(), stripes * static_cast<std::size_t>(p.d) * p.beta()};
}

AuditReport cmd_audit(int n, int d, int m, Scheme scheme, int ell, std::optional<int> max_set_size,
                      std::optional<std::uint32_t> q) {
  const SystemParams p = SystemParams::make(n, d, m, q);
  const SecureLayout layout(p, scheme, ell);
  const Mat psi = build_encoder(p);
  AuditReport rep;
  rep.scheme = scheme;
  rep.ell = ell;
  rep.key_count = layout.key_count();
  const int cap = std::min(max_set_size.value_or(ell), n);
  for (int size = 1; size <= cap; ++size) {
    for (const Subset& s : subsets_of(n, size)) {
      const auto& L = s.elems();
      LinearObservation obs =
          scheme == Scheme::TypeII ? observe_type_ii(layout, psi, L) : observe_type_i(layout, psi, L);
      AuditRow row;
      row.L = L;
      row.entropy = observation_entropy(obs);
      row.leakage = mutual_information(obs);
      row.keys_recoverable = keys_recoverable(obs);
      if (size <= ell) {
        row.ok = row.leakage == 0 && row.entropy <= rep.key_count && (size < ell || row.keys_recoverable);
      }
      rep.pass = rep.pass && row.ok;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

void print_audit(std::ostream& os, const AuditReport& r) {
  os << "scheme,L,H_E,I_S_E,keys_recoverable,Q\n";
  for (const AuditRow& row : r.rows) {
    os << scheme_name(r.scheme) << ",\"{";
    for (std::size_t i = 0; i < row.L.size(); ++i) os << (i ? "," : "") << row.L[i];
    os << "}\"," << row.entropy << ',' << row.leakage << ',' << (row.keys_recoverable ? 1 : 0) << ',' << r.key_count;
    if (!row.ok) os << ",FAIL";
    os << '\n';
  }
  os << (r.pass ? "PASS" : "FAIL") << " (" << r.rows.size() << " sets, ell=" << r.ell << ")\n";
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("not an integer: '" + s + "' in '" + text + "'");
    return v;
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    int lo = to_int(text.substr(0, dots));
    int hi = to_int(text.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  return out;
}

}  // namespace detsec
