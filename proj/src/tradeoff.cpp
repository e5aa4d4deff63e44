// SPDX-License-Identifier: Apache-2.0

#include "detsec/tradeoff.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace detsec {

namespace mp = boost::multiprecision;

std::string rational_string(const Rational& r) {
  if (mp::denominator(r) == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

std::string rational_decimal(const Rational& r) {
  mp::cpp_dec_float_50 v(mp::numerator(r));
  v /= mp::cpp_dec_float_50(mp::denominator(r));
  return v.str(12);
}

namespace {

std::int64_t C(long b, long a) { return static_cast<std::int64_t>(binom(b, a)); }

Rational rmin(const Rational& x, const Rational& y) { return x < y ? x : y; }

}  // namespace

TradeoffPoint point(int d, int ell, int m, Scheme scheme) {
  if (m < 1 || m > d) throw std::invalid_argument("point: need 1 <= m <= d");
  if (ell < 0) throw std::invalid_argument("point: ell must be nonnegative");
  TradeoffPoint pt{scheme, d, ell, m, C(d, m), C(d - 1, m - 1), 0, std::nullopt, std::nullopt, false};
  switch (scheme) {
    case Scheme::Plain:
      pt.fs = m * C(d + 1, m + 1);
      break;
    case Scheme::TypeI:
      pt.fs = std::max<std::int64_t>(0, (d - ell) * C(d, m) - C(d, m + 1) + C(ell, m + 1));
      break;
    case Scheme::TypeII:
      pt.fs = m * C(d - ell + 1, m + 1);
      break;
  }
  if (pt.fs > 0) {
    pt.alpha_norm = Rational(pt.alpha, pt.fs);
    pt.beta_norm = Rational(pt.beta, pt.fs);
  }
  return pt;
}

std::int64_t converse_value(int d, int ell, int m, Scheme scheme) {
  auto beta_a = [&](long a) { return C(d, m) - C(d - a, m); };
  switch (scheme) {
    case Scheme::Plain: {
      // Same chain with no eavesdropper.
      std::int64_t s = 0;
      for (int i = 2; i <= d + 1; ++i) s += beta_a(i - 1);
      return s;
    }
    case Scheme::TypeI: {
      // Node i in [ell+2, d+1] helps repair i-ell-1 nodes at once.
      std::int64_t s = 0;
      for (int i = ell + 2; i <= d + 1; ++i) s += beta_a(i - ell - 1);
      return s;
    }
    case Scheme::TypeII: {
      if (ell + m > d) return 0;
      // m nodes bounded through the traffic into L, then the remaining chain.
      std::int64_t s = m * (C(d, m) - beta_a(ell));
      for (int u = ell + m + 2; u <= d + 1; ++u) s += beta_a(u - m - 1) - beta_a(ell);
      return s;
    }
  }
  return 0;
}

int pareto_count(int d, int ell) {
  if (d < 1) throw std::invalid_argument("pareto_count: d must be positive");
  if (ell < 0) throw std::invalid_argument("pareto_count: ell must be nonnegative");
  if (ell == 0) return d;
  const std::int64_t rhs = 1 + 4LL * ell * (d + 1);
  int t = 0;
  while (true) {
    std::int64_t lhs = 2LL * ell * (t + 1) + 1;
    if (lhs * lhs >= rhs) return t;
    ++t;
  }
}

std::set<int> pareto_points_bruteforce(int d, int ell, Scheme scheme) {
  struct P {
    Rational x;
    Rational y;
    int m;
  };
  std::vector<P> pts;
  for (int m = 1; m <= d; ++m) {
    TradeoffPoint tp = point(d, ell, m, scheme);
    if (tp.fs > 0) pts.push_back({*tp.alpha_norm, *tp.beta_norm, m});
  }
  std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.m < b.m;
  });
  // Staircase: keep points strictly lower than everything to their left.
  std::vector<P> stair;
  for (const P& p : pts) {
    if (stair.empty() || p.y < stair.back().y) {
      if (!stair.empty() && stair.back().x == p.x) continue;
      stair.push_back(p);
    }
  }
  // Lower convex chain; collinear middle points are convex combinations and drop out.
  std::vector<P> hull;
  for (const P& p : stair) {
    while (hull.size() >= 2) {
      const P& a = hull[hull.size() - 2];
      const P& b = hull.back();
      Rational cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::set<int> out;
  for (const P& p : hull) out.insert(p.m);
  return out;
}

Rational cutset_bound(int d, int ell, const Rational& alpha, const Rational& beta) {
  Rational s = 0;
  for (int i = ell; i <= d - 1; ++i) s += rmin(alpha, Rational(d - i) * beta);
  return s;
}

namespace {

void add(std::vector<BoundCheck>& out, std::string name, const Rational& achieved, const Rational& bound) {
  out.push_back({std::move(name), achieved, bound, achieved <= bound, achieved == bound});
}

}  // namespace

std::vector<BoundCheck> external_bound_check(int d, int ell, int m, std::optional<int> n_opt) {
  const int n = n_opt.value_or(d + 1);
  std::vector<BoundCheck> out;
  const TradeoffPoint p1 = point(d, ell, m, Scheme::TypeI);
  const TradeoffPoint p2 = point(d, ell, m, Scheme::TypeII);
  const Rational a = p1.alpha;
  const Rational b = p1.beta;
  const Rational fs1 = p1.fs;
  const Rational fs2 = p2.fs;

  const Rational cut = cutset_bound(d, ell, a, b);
  if (ell < d) add(out, "cutset/type1", fs1, cut);
  add(out, "cutset/type2", fs2, cut);
  add(out, "converse/type1", fs1, converse_value(d, ell, m, Scheme::TypeI));
  add(out, "converse/type2", fs2, converse_value(d, ell, m, Scheme::TypeII));

  // MBR construction of Shah et al. with alpha = d beta.
  if (m == 1 && ell < d) {
    add(out, "shah-mbr/type1", fs1, (Rational(d * d) - C(d, 2)) * b - (Rational(ell * d) - C(ell, 2)) * b);
  }
  // Tandon et al., ell = 1, k = d.
  if (ell == 1) add(out, "tandon-ell1/type2", fs2, Rational(d - 1) * (a + Rational(d) * b) / 4);
  // Tandon et al., k = d = 2, ell = 1 capacities.
  if (d == 2 && ell == 1) {
    add(out, "tandon-k2/type1", fs1, rmin(a, b));
    add(out, "tandon-k2/type2", fs2, rmin(a / 2, b));
  }
  // Tandon et al., n = d + 1 and ell = d - 1 capacities.
  if (n == d + 1 && ell == d - 1 && ell >= 1) {
    add(out, "tandon-n=d+1/type1", fs1, rmin(a, b));
    add(out, "tandon-n=d+1/type2", fs2, rmin(a / d, b));
  }
  // Tandon et al. general Type-II upper bound for k = d.
  if (ell >= 1 && ell <= d) {
    const bool small = Rational(ell) <= rmin(Rational(n - d), Rational(d, 2));
    Rational bound = small ? Rational((d - ell) * (d - ell)) * a / d : Rational((d - ell) * (d - 1)) * a / d;
    add(out, "tandon-general/type2", fs2, bound);
  }
  // (4,3,3,1) capacities.
  if (n == 4 && d == 3 && ell == 1) {
    add(out, "tandon-4331/type1", fs1, rmin(rmin(a, 2 * b) + rmin(a, b), (a + 6 * b) / 3));
    add(out, "tandon-4331/type2", fs2, rmin(a, 3 * b));
    static const Rational ext[3][2] = {{1, Rational(1, 3)}, {Rational(3, 5), Rational(2, 5)}, {Rational(1, 2), Rational(1, 2)}};
    if (p1.alpha_norm) {
      add(out, "tandon-4331/type1-alpha-norm", *p1.alpha_norm, ext[m - 1][0]);
      add(out, "tandon-4331/type1-beta-norm", *p1.beta_norm, ext[m - 1][1]);
    }
  }
  // Shao et al. n = d + 1 Type-II family, t = m + 1: parameters scale by 1 / m.
  if (n == d + 1 && ell >= 1 && m <= d - ell) {
    const int t = m + 1;
    const Rational at = Rational(C(n - 1, t - 1), t - 1);
    const Rational bt = Rational(C(n - 1, t - 1), d);
    const Rational ft = C(n - ell, t);
    add(out, "shao/type2-alpha", a, at * (t - 1));
    add(out, "shao/type2-beta", b, bt * (t - 1));
    add(out, "shao/type2-fs", fs2, ft * (t - 1));
  }
  // (7,6,6,1) Type-II extreme points.
  if (n == 7 && d == 6 && ell == 1 && m <= 2 && p2.alpha_norm) {
    static const Rational ext[2][2] = {{Rational(2, 5), Rational(1, 15)}, {Rational(3, 8), Rational(1, 8)}};
    add(out, "shao-7661/type2-alpha-norm", *p2.alpha_norm, ext[m - 1][0]);
    add(out, "shao-7661/type2-beta-norm", *p2.beta_norm, ext[m - 1][1]);
  }
  return out;
}

void emit_tradeoff_csv(std::ostream& os, const std::vector<int>& ds, const std::vector<int>& ells,
                       const std::vector<Scheme>& schemes) {
  os << "scheme,d,ell,m,alpha,beta,Fs,alpha_norm,beta_norm,pareto,alpha_norm_exact,beta_norm_exact\n";
  for (Scheme s : schemes) {
    for (int d : ds) {
      for (int ell : ells) {
        if (d < 1 || ell < 0) continue;
        if (s == Scheme::Plain && ell != 0) continue;
        if (s == Scheme::TypeI && ell >= d) continue;
        if (s == Scheme::TypeII && ell > d) continue;
        const std::set<int> pareto = pareto_points_bruteforce(d, ell, s);
        for (int m = 1; m <= d; ++m) {
          TradeoffPoint p = point(d, ell, m, s);
          os << scheme_name(s) << ',' << d << ',' << ell << ',' << m << ',' << p.alpha << ',' << p.beta << ','
             << p.fs << ',';
          if (p.alpha_norm) {
            os << rational_decimal(*p.alpha_norm) << ',' << rational_decimal(*p.beta_norm) << ','
               << (pareto.count(m) ? 1 : 0) << ',' << rational_string(*p.alpha_norm) << ','
               << rational_string(*p.beta_norm) << '\n';
          } else {
            os << ",,0,,\n";
          }
        }
      }
    }
  }
}

}  // namespace detsec
