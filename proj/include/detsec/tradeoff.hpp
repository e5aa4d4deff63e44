// SPDX-License-Identifier: Apache-2.0

#ifndef DETSEC_TRADEOFF_HPP
#define DETSEC_TRADEOFF_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "detsec/secure_layout.hpp"

namespace detsec {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q", or "p" for integers.
std::string rational_string(const Rational& r);
/// Decimal rendering with 12 significant digits.
std::string rational_decimal(const Rational& r);

struct TradeoffPoint {
  Scheme scheme;
  int d;
  int ell;
  int m;
  std::int64_t alpha;
  std::int64_t beta;
  std::int64_t fs;
  /// alpha / F_s and beta / F_s; empty when F_s = 0.
  std::optional<Rational> alpha_norm;
  std::optional<Rational> beta_norm;
  bool pareto = false;
};

/// Achievable (alpha, beta, F_s) at mode m. Plain ignores ell.
TradeoffPoint point(int d, int ell, int m, Scheme scheme);

/// Upper bound on the secure file size of a determinant code at mode m,
/// evaluated term by term from the repair-entropy identity
/// H(R_{u -> A}) = C(d, m) - C(d - |A|, m).
std::int64_t converse_value(int d, int ell, int m, Scheme scheme);

/// Largest t with t < (sqrt(1 + 4 ell (d+1)) - 1) / (2 ell), decided in integers.
/// ell = 0 returns d (every mode of the plain code is a corner point).
int pareto_count(int d, int ell);

/// Modes whose normalized pair is a vertex of the lower-left boundary of the
/// convex hull of all normalized pairs (modes with F_s = 0 excluded).
std::set<int> pareto_points_bruteforce(int d, int ell, Scheme scheme);

/// sum_{i=ell}^{d-1} min(alpha, (d - i) beta).
Rational cutset_bound(int d, int ell, const Rational& alpha, const Rational& beta);

struct BoundCheck {
  std::string name;
  Rational achieved;
  Rational bound;
  bool satisfied;  // achieved <= bound
  bool equal;
};

/// Every applicable known bound and capacity result at (d, ell, m) for
/// k = d. `n` defaults to d + 1.
std::vector<BoundCheck> external_bound_check(int d, int ell, int m, std::optional<int> n = std::nullopt);

/// Header plus one row per (d, ell, m, scheme), with the pareto column filled
/// from the brute-force hull. Invalid (scheme, ell) combinations are skipped.
void emit_tradeoff_csv(std::ostream& os, const std::vector<int>& ds, const std::vector<int>& ells,
                       const std::vector<Scheme>& schemes);

}  // namespace detsec

#endif  // DETSEC_TRADEOFF_HPP
