// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_COMMANDS_HPP
#define DETSEC_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "detsec/secure_layout.hpp"

namespace detsec {

// Library side of the detsec command-line tool. Each command returns a
// result struct; printing is left to the caller.

struct EncodeOptions {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  int n = 0;
  int d = 0;
  int m = 0;
  Scheme scheme = Scheme::Plain;
  int ell = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> q;
};

struct EncodeResult {
  std::vector<std::filesystem::path> shards;
  std::size_t stripes = 0;
  std::size_t symbols_per_stripe = 0;
  std::optional<std::string> warning;
};

/// Name of the shard for node i inside an output directory.
std::filesystem::path shard_path(const std::filesystem::path& dir, int node);

EncodeResult cmd_encode(const EncodeOptions& opt);

/// Needs at least d shards of one encoding; decodes from the first d distinct
/// nodes and checks parity plus any surplus shards against the result.
void cmd_recover(const std::vector<std::filesystem::path>& shards, const std::filesystem::path& out);

struct RepairResult {
  std::size_t stripes = 0;
  std::size_t beta = 0;
  /// stripes * d * beta symbols downloaded in total.
  std::size_t bandwidth_symbols = 0;
};

/// Rebuilds the shard of node `failed` from exactly d helper shards.
RepairResult cmd_repair(int failed, const std::vector<std::filesystem::path>& helpers,
                        const std::filesystem::path& out);

struct AuditRow {
  std::vector<int> L;
  std::size_t entropy = 0;
  std::size_t leakage = 0;
  bool keys_recoverable = false;
  bool ok = true;
};

struct AuditReport {
  Scheme scheme = Scheme::Plain;
  int ell = 0;
  std::size_t key_count = 0;
  std::vector<AuditRow> rows;
  bool pass = true;
};

/// Audits every eavesdropper set with 1 <= |L| <= max_set_size (default ell).
/// Sets with |L| <= ell must leak nothing and stay within |Q| symbols of
/// entropy; at |L| = ell the keys must be recoverable. Larger sets are only reported.
AuditReport cmd_audit(int n, int d, int m, Scheme scheme, int ell, std::optional<int> max_set_size,
                      std::optional<std::uint32_t> q = std::nullopt);

void print_audit(std::ostream& os, const AuditReport& r);

/// "a..b" (inclusive, empty when b < a) or "a,b,c" or "a".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace detsec

#endif  // DETSEC_COMMANDS_HPP
