// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_DETCODE_HPP
#define DETSEC_DETCODE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "detsec/field.hpp"
#include "detsec/matrix.hpp"
#include "detsec/subsets.hpp"

namespace detsec {

/// Parameters of an (n, k = d, d) determinant code at mode m.
struct SystemParams {
  int n;
  int d;
  int m;
  Field field;

  /// Validates 1 <= m <= d <= n. Without `q` the field is GF(smallest prime > n);
  /// an explicit q must be prime and greater than n.
  static SystemParams make(int n, int d, int m, std::optional<std::uint32_t> q = std::nullopt);

  /// Symbols per node, C(d, m).
  std::size_t alpha() const { return binom(d, m); }
  /// Repair symbols per helper, C(d-1, m-1).
  std::size_t beta() const { return binom(d - 1, m - 1); }
  /// Information symbols per stripe, m * C(d+1, m+1).
  std::size_t file_size() const { return static_cast<std::size_t>(m) * binom(d + 1, m + 1); }

  LexIndexer columns() const { return LexIndexer(d, m); }
  /// Columns of a repair encoder: (m-1)-subsets of [d].
  LexIndexer repair_columns() const { return LexIndexer(d, m - 1); }
};

enum class CellType { V, W, P };

/// V when x is in I, W when x < max I, P when x > max I.
CellType classify(int x, const Subset& I);

/// A cell of the message matrix, addressed by row label and column index.
struct Cell {
  int x;            // 1-based row
  std::size_t col;  // lex rank of the column subset
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// V and W cells in fill order: rows top to bottom, columns in lex order within a row.
std::vector<Cell> free_cells(int d, int m);
/// P cells, one per parity group, in increasing lex order of the group.
std::vector<Cell> parity_cells(int d, int m);

/// A message matrix under construction; unset cells are empty.
class DraftMatrix {
 public:
  explicit DraftMatrix(const SystemParams& p);

  const SystemParams& params() const noexcept { return params_; }
  std::optional<Fe> get(int x, std::size_t col) const;
  void set(int x, std::size_t col, Fe v);
  /// Throws std::logic_error if any cell is still empty.
  Mat finish() const;

 private:
  SystemParams params_;
  std::size_t alpha_;
  std::vector<std::optional<Fe>> cells_;
};

/// Value of the P cell (x, I) that closes parity group I + {x}:
///   (-1)^m * sum_{y in I} (-1)^{ind_I(y)} M(y, I + {x} - {y}).
/// Throws std::invalid_argument unless x > max I, std::logic_error on an unset source cell.
Fe parity_value(const DraftMatrix& draft, int x, const Subset& I);

/// Fills V/W cells from `info` in fill order and computes every P cell.
/// Requires info.size() == file_size().
Mat build_message_matrix(const SystemParams& p, std::span<const Fe> info);

/// True when every parity group of M sums to zero.
bool parity_holds(const SystemParams& p, const Mat& M);

/// n x d Vandermonde matrix with Psi(i, j) = i^(j-1).
Mat build_encoder(const SystemParams& p);

/// Row i of Psi * M, labelled with its node id.
struct NodeShare {
  int node;
  std::vector<Fe> symbols;
};

std::vector<NodeShare> encode(const SystemParams& p, const Mat& psi, const Mat& M);

/// Rebuilds M from exactly d shares with distinct node ids.
Mat recover_data(const SystemParams& p, const Mat& psi, std::span<const NodeShare> shares);

/// Xi^f, an alpha x C(d, m-1) matrix. Entry (I, J) is (-1)^{ind_I(x)} Psi(f, x) when
/// J + {x} = I and zero otherwise.
Mat build_repair_encoder(const SystemParams& p, const Mat& psi, int f);

struct RepairPacket {
  int helper;
  int failed;
  std::vector<Fe> payload;
};

/// payload = N_h * Xi^f. Throws std::invalid_argument when h == f.
RepairPacket repair_data(const NodeShare& helper, const Mat& xi_f, int f);

/// Rebuilds node f from d packets sent by distinct helpers other than f.
NodeShare repair_node(const SystemParams& p, const Mat& psi, int f, std::span<const RepairPacket> packets);

/// Rank of [Xi^f1 | Xi^f2 | ...] over the failed set A.
std::size_t multi_repair_rank(const SystemParams& p, const Mat& psi, std::span<const int> failed);

/// Transmits only beta coordinates of a repair packet. The basis is the first
/// beta independent columns of Xi^f, so both ends derive it from f alone.
class RepairBasis {
 public:
  RepairBasis(const SystemParams& p, const Mat& psi, int f);

  const std::vector<std::size_t>& columns() const noexcept { return cols_; }
  std::vector<Fe> compress(std::span<const Fe> payload) const;
  std::vector<Fe> expand(std::span<const Fe> compressed) const;

 private:
  std::vector<std::size_t> cols_;
  Mat coeffs_;  // Xi(:, cols) * coeffs = Xi
};

}  // namespace detsec

#endif  // DETSEC_DETCODE_HPP
