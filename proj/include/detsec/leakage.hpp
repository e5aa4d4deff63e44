// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_LEAKAGE_HPP
#define DETSEC_LEAKAGE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "detsec/detcode.hpp"
#include "detsec/secure_layout.hpp"

namespace detsec {

// All entropies here are in q-ary symbols. With S and Q uniform and
// independent, an observation y = M_S S + M_Q Q has H(y) = rank[M_S | M_Q]
// and H(y | S) = rank(M_Q).

/// What an eavesdropper sees, as a linear map of (secrets, keys).
struct LinearObservation {
  Mat ms;  // obs x F_s
  Mat mq;  // obs x |Q|
  std::string provenance;
};

/// (d * alpha) x (F_s + |Q|) matrix: row (x-1)*alpha + col expresses message
/// cell (x, col) in terms of the secret slots followed by the key slots.
Mat message_generator(const SecureLayout& layout);

/// Stored contents of the nodes in L.
LinearObservation observe_type_i(const SecureLayout& layout, const Mat& psi, std::span<const int> L);
/// Every repair packet R_{h->f} for f in L and h in [n] - {f}, ordered by f, then h.
LinearObservation observe_type_ii(const SecureLayout& layout, const Mat& psi, std::span<const int> L);

/// I(S; E) = rank[M_S | M_Q] - rank(M_Q).
std::size_t mutual_information(const LinearObservation& obs);
/// H(E) = rank[M_S | M_Q].
std::size_t observation_entropy(const LinearObservation& obs);
/// Given S, the keys are pinned down by E iff rank(M_Q) = |Q|.
bool keys_recoverable(const LinearObservation& obs);

/// Column order used by the Type-I key decoder: reverse lex order.
std::vector<std::size_t> decode_order_type_i(const SystemParams& p);

/// Recovers the keys from the contents E (|L| x alpha, rows in the order of L)
/// of ell nodes and the secrets, column by column in reverse lex order.
/// Throws std::runtime_error if E is not consistent with S under any keys.
std::vector<Fe> decode_keys_type_i(const SecureLayout& layout, const Mat& psi, std::span<const int> L, const Mat& E,
                                   std::span<const Fe> secrets);

struct TypeIIDecode {
  std::vector<Fe> keys;
  /// Helper rows used to invert Psi(H, :).
  std::vector<int> helpers;
  /// Columns of [Xi^q1 | ... | Xi^q_ell] consumed by the C-block solve.
  std::vector<std::size_t> solve_columns;
};

/// Recovers the keys from all packets entering the nodes of L plus the secrets.
/// Needs n >= d + 1 so every node of L can be rebuilt from its own packets.
/// Throws std::runtime_error on inconsistent input.
TypeIIDecode decode_keys_type_ii(const SecureLayout& layout, const Mat& psi, std::span<const int> L,
                                 std::span<const RepairPacket> packets, std::span<const Fe> secrets);

/// Column label <j, J> of the stacked repair encoder: column J of Xi^{q_j}.
struct XiColumn {
  int j;
  Subset J;
};

struct XiAudit {
  std::vector<int> L;
  Mat xi_l{Field(2), 0, 0};           // alpha x ell*C(d, m-1)
  std::vector<std::size_t> top_rows;  // m-subsets meeting [ell], lex order
  std::vector<std::size_t> j_cols;    // columns <j, J> with J inside [j+1, d]
  std::vector<XiColumn> j_labels;     // parallel to j_cols
  std::size_t expected_rank = 0;      // C(d, m) - C(d - ell, m)
  std::size_t top_rank = 0;           // rank of the top rows of xi_l
  std::size_t square_rank = 0;        // rank of xi_l(top_rows, j_cols)
};

/// Builds the audit for L (distinct nodes, |L| <= d) and reports whether the
/// top block has rank C(d, m) - C(d - |L|, m).
bool xi_top_fullrank(const SystemParams& p, const Mat& psi, std::span<const int> L, XiAudit& audit);

struct TriangularReport {
  Mat permuted;                        // square block, rows and columns sorted by (J, j)
  std::vector<Subset> group_keys;      // J of each diagonal group, in order
  std::vector<std::size_t> group_sizes;
  bool upper_zero = false;        // every block right of the diagonal vanishes
  bool diagonal_matches = false;  // diagonal block (<i,J>, <j,J>) = -Psi(q_j, i)
  bool diagonal_full_rank = false;
  bool partition_ok = false;  // group sizes sum to the square size and cover every column once
  bool clean() const { return upper_zero && diagonal_matches && diagonal_full_rank && partition_ok; }
};

TriangularReport xi_block_triangularize(const SystemParams& p, const Mat& psi, const XiAudit& audit);

}  // namespace detsec

#endif  // DETSEC_LEAKAGE_HPP
