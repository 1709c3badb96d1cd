#include "bergman/index_sets.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

const Exponent kTwo(2, 1);

struct Scan {
  // smallest critical exponent and its lexicographically smallest witness
  std::optional<Rational> best;
  std::optional<MultiIndex> witness;

  void offer(const Rational& t, const MultiIndex& a, bool prefer_larger = false) {
    bool better = !best || (prefer_larger ? t > *best : t < *best);
    if (better) {
      best = t;
      witness = a;
    }
  }
};

}  // namespace

int default_window(const Domain& d) {
  if (d.family() == Family::Hartogs) return std::max(6, d.m() + d.n());
  return 6;
}

bool member(const Domain& d, const MultiIndex& alpha, const Exponent& p) {
  return holomorphy_ok(d, alpha) && moment_finite(d, alpha, p);
}

std::optional<Rational> critical_exponent(const Domain& d, const MultiIndex& alpha) {
  if (!holomorphy_ok(d, alpha)) return std::nullopt;
  std::optional<Rational> t;
  for (const auto& con : d.finiteness_constraints()) {
    long s = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += static_cast<long>(con.a[i]) * alpha[i];
    if (s < 0) {
      Rational ti(con.b, -s);
      ti.canonicalize();
      if (!t || ti < *t) t = ti;
    }
  }
  return t;
}

bool structurally_p_independent(const Domain& d) {
  for (const auto& con : d.finiteness_constraints()) {
    for (std::size_t i = 0; i < con.a.size(); ++i) {
      if (d.axis_meets_hyperplane(i) ? con.a[i] < 0 : con.a[i] != 0) return false;
    }
  }
  return true;
}

IndexSetWindow index_set_window(const Domain& d, const Exponent& p, int radius) {
  if (radius < 1) throw DomainError("window radius must be >= 1");
  IndexSetWindow w{d, p, radius, {}};
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (member(d, a, p)) w.members.push_back(a);
  });
  return w;
}

SetComparison sets_equal(const Domain& d, const Exponent& p1, const Exponent& p2, int radius) {
  SetComparison out{true, std::nullopt};
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (!out.equal) return;
    if (member(d, a, p1) != member(d, a, p2)) {
      out.equal = false;
      out.witness = a;
    }
  });
  return out;
}

std::string to_string(ThresholdDirection dir) {
  return dir == ThresholdDirection::EntersBelow ? "enters_below" : "leaves_above";
}

std::vector<Threshold> thresholds(const Domain& d, const Exponent& p_lo, const Exponent& p_hi, int radius) {
  if (!(p_lo < p_hi)) throw DomainError("thresholds require p_lo < p_hi");
  std::map<Rational, MultiIndex> found;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    auto t = critical_exponent(d, a);
    if (!t || *t <= p_lo.value() || *t > p_hi.value()) return;
    found.try_emplace(*t, a);  // lexicographic scan keeps the smallest witness
  });

  const Rational eps(1, 1000);
  std::vector<Threshold> out;
  for (const auto& [t, a] : found) {
    Exponent te(t);
    bool flips_below = !sets_equal(d, Exponent(t - eps), te, radius).equal;
    bool flips_above = !sets_equal(d, te, Exponent(t + eps), radius).equal;
    auto dir = member(d, a, kTwo) ? ThresholdDirection::LeavesAbove : ThresholdDirection::EntersBelow;
    out.push_back({te, a, dir, flips_below || flips_above});
  }
  return out;
}

std::string IndexValue::kind_str() const {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::Unbounded: return "unbounded";
    case Kind::AtLeast: return "at_least";
  }
  return {};
}

std::string IndexValue::str() const {
  switch (kind) {
    case Kind::Exact: return to_string(value);
    case Kind::Unbounded: return "unbounded";
    case Kind::AtLeast: return ">=" + to_string(value);
  }
  return {};
}

Ordering compare_le(const IndexValue& a, const IndexValue& b) {
  using K = IndexValue::Kind;
  if (b.kind == K::Unbounded) return Ordering::Holds;
  if (a.kind == K::Unbounded) return Ordering::Violated;
  if (a.kind == K::Exact && b.kind == K::Exact) return a.value <= b.value ? Ordering::Holds : Ordering::Violated;
  if (a.kind == K::Exact && b.kind == K::AtLeast)
    return a.value <= b.value ? Ordering::Holds : Ordering::Incomparable;
  if (a.kind == K::AtLeast && b.kind == K::Exact)
    return b.value < a.value ? Ordering::Violated : Ordering::Incomparable;
  return Ordering::Incomparable;
}

IndexResult duality_bound(const Domain& d, int radius, const Rational& p_cap) {
  if (p_cap <= 2) throw DomainError("p_cap must exceed 2");
  if (radius < 2) throw DomainError("window radius must be >= 2");
  if (structurally_p_independent(d)) return {IndexValue::unbounded(), {}};

  Scan up;    // smallest threshold above 2
  Scan down;  // largest threshold in (1, 2]
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    auto t = critical_exponent(d, a);
    if (!t) return;
    if (*t > 2)
      up.offer(*t, a);
    else if (*t > 1)
      down.offer(*t, a, /*prefer_larger=*/true);
  });

  if (down.best && *down.best == 2)
    return {IndexValue::exact(Rational(2)), {{*down.witness, "enters_below_2"}}};

  std::optional<Rational> bound;
  std::vector<Witness> witnesses;
  if (up.best) {
    bound = *up.best;
    witnesses.push_back({*up.witness, "leaves_above_p"});
  }
  if (down.best) {
    Rational c = conjugate_exponent(Exponent(*down.best)).value();
    if (!bound || c < *bound) {
      bound = c;
      witnesses.clear();
    }
    if (c == *bound) witnesses.push_back({*down.witness, "enters_below_q"});
  }
  if (!bound || *bound > p_cap) return {IndexValue::at_least(p_cap), {}};
  return {IndexValue::exact(*bound), witnesses};
}

Rational regularity_formula(int m, int n) {
  Rational r(2 * (m + n), m + n - 1);
  r.canonicalize();
  return r;
}

namespace {

// Lexicographically smallest delta with delta_1 >= 0 and n delta_1 + m delta_2 = -(m+n-1).
MultiIndex hartogs_extremal_index(int m, int n) {
  const int k = m + n - 1;
  for (int d1 = 0; d1 < m; ++d1) {
    int rhs = -k - n * d1;
    if (rhs % m == 0) return MultiIndex{d1, rhs / m};
  }
  throw ChainViolation("no extremal Hartogs index; gcd(m,n) != 1?");
}

}  // namespace

RegularityResult regularity_probe(const Domain& d, int radius) {
  if (radius < 2) throw DomainError("window radius must be >= 2");
  if (structurally_p_independent(d)) return {IndexValue::unbounded(), std::nullopt, std::nullopt, std::nullopt};

  Scan scan;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& delta) {
    if (!member(d, delta, kTwo)) return;
    if (auto t = critical_exponent(d, delta)) scan.offer(*t, delta);
  });

  if (d.family() == Family::Hartogs) {
    Rational formula = regularity_formula(d.m(), d.n());
    if (!scan.best || *scan.best > formula) {
      int need = hartogs_extremal_index(d.m(), d.n()).max_abs();
      need = std::max(need, 2);
      throw WindowTooSmall("window radius " + std::to_string(radius) +
                               " cannot realize the extremal index; raise the window to at least " +
                               std::to_string(need),
                           need);
    }
    if (*scan.best < formula) throw ChainViolation("regularity probe below 2(m+n)/(m+n-1)");
  }
  if (!scan.best) return {IndexValue::at_least(Rational(2)), std::nullopt, std::nullopt, std::nullopt};

  const MultiIndex& delta = *scan.witness;
  MultiIndex gamma(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) gamma[i] = std::max(0, -delta[i]);
  return {IndexValue::exact(*scan.best), delta + gamma, gamma, delta};
}

IndexResult beta_upper(const Domain& d, int radius, const Rational& p_cap) {
  if (radius < 2) throw DomainError("window radius must be >= 2");
  if (structurally_p_independent(d)) return {IndexValue::unbounded(), {}};
  Scan scan;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (!member(d, a, kTwo)) return;
    if (auto t = critical_exponent(d, a)) scan.offer(*t, a);
  });
  if (!scan.best || *scan.best > p_cap) return {IndexValue::at_least(p_cap), {}};
  return {IndexValue::exact(*scan.best), {{*scan.witness, "first_lost"}}};
}

IndexReport index_report(const Domain& d, int radius, const Rational& p_cap) {
  IndexReport r{d, radius, p_cap, duality_bound(d, radius, p_cap), regularity_probe(d, radius),
                beta_upper(d, radius, p_cap)};
  if (compare_le(r.duality.value, r.regularity.value) == Ordering::Violated)
    throw ChainViolation("duality bound " + r.duality.value.str() + " exceeds regularity probe " +
                         r.regularity.value.str() + " on " + d.spec());
  if (compare_le(r.regularity.value, r.beta.value) == Ordering::Violated)
    throw ChainViolation("regularity probe " + r.regularity.value.str() + " exceeds beta upper bound " +
                         r.beta.value.str() + " on " + d.spec());
  return r;
}

}  // namespace bergman
