/**
 * @file index_sets.hpp
 * @brief Allowable index sets S(Omega, A^p), threshold exponents and the
 *        duality / regularity / integrability indices.
 *
 * Membership of a multi-index is the exact predicate
 *     holomorphy_ok(alpha) && moment(alpha, p) finite,
 * and for the supported families every allowable alpha has a critical
 * exponent t(alpha) in (0, inf] with alpha in S(A^p) iff p < t(alpha).
 * All index computations are exact scans of the box {|alpha_i| <= N}.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/domains.hpp"

namespace bergman {

/// Window radius used when the caller does not choose one: 6, widened to
/// m + n on Hartogs triangles so that the extremal indices are realized.
int default_window(const Domain& d);
inline constexpr long kDefaultPCap = 64;

bool member(const Domain& d, const MultiIndex& alpha, const Exponent& p);

/// sup{p > 0 : moment(alpha, p) finite} for holomorphic alpha; nullopt when
/// the moment is finite for every p (or alpha is never allowable).
std::optional<Rational> critical_exponent(const Domain& d, const MultiIndex& alpha);

/// No holomorphic monomial can ever lose integrability: every finiteness
/// constraint has a_i >= 0 on constrained axes and a_i = 0 on free axes.
bool structurally_p_independent(const Domain& d);

struct IndexSetWindow {
  Domain domain;
  Exponent p;
  int radius;
  std::vector<MultiIndex> members;  // lexicographic
};

IndexSetWindow index_set_window(const Domain& d, const Exponent& p, int radius);

struct SetComparison {
  bool equal;
  std::optional<MultiIndex> witness;  // smallest element of the symmetric difference
};

SetComparison sets_equal(const Domain& d, const Exponent& p1, const Exponent& p2, int radius);

enum class ThresholdDirection {
  EntersBelow,  // witness joins the index set as p drops below t (witness not in S(A^2))
  LeavesAbove   // witness of S(A^2) drops out for p >= t
};

struct Threshold {
  Exponent value;
  MultiIndex witness;
  ThresholdDirection direction;
  bool verified;  // membership flips across t +- 1/1000
};

std::string to_string(ThresholdDirection dir);

/// Thresholds in (p_lo, p_hi], ascending.
std::vector<Threshold> thresholds(const Domain& d, const Exponent& p_lo, const Exponent& p_hi, int radius);

struct IndexValue {
  enum class Kind { Exact, Unbounded, AtLeast };
  Kind kind = Kind::Unbounded;
  Rational value;  // meaningful for Exact and AtLeast

  static IndexValue exact(Rational v) { return {Kind::Exact, std::move(v)}; }
  static IndexValue unbounded() { return {Kind::Unbounded, Rational(0)}; }
  static IndexValue at_least(Rational v) { return {Kind::AtLeast, std::move(v)}; }

  std::string kind_str() const;
  std::string str() const;
  friend bool operator==(const IndexValue& a, const IndexValue& b) {
    return a.kind == b.kind && (a.kind == Kind::Unbounded || a.value == b.value);
  }
};

enum class Ordering { Holds, Violated, Incomparable };

/// Is a <= b, given that Unbounded means +inf and AtLeast(c) means some value >= c?
Ordering compare_le(const IndexValue& a, const IndexValue& b);

struct Witness {
  MultiIndex index;
  std::string role;
};

struct IndexResult {
  IndexValue value;
  std::vector<Witness> witnesses;
};

IndexResult duality_bound(const Domain& d, int radius, const Rational& p_cap);

struct RegularityResult {
  IndexValue value;
  /// Mixed-monomial witness f = z^alpha conj(z)^gamma with B f a multiple of z^delta.
  std::optional<MultiIndex> alpha, gamma, delta;
};

/// 2(m+n)/(m+n-1).
Rational regularity_formula(int m, int n);

RegularityResult regularity_probe(const Domain& d, int radius);

IndexResult beta_upper(const Domain& d, int radius, const Rational& p_cap);

struct IndexReport {
  Domain domain;
  int radius;
  Rational p_cap;
  IndexResult duality;
  RegularityResult regularity;
  IndexResult beta;
};

/// Assembles the three indices and checks duality <= regularity <= beta.
/// Throws ChainViolation when a comparable pair is out of order.
IndexReport index_report(const Domain& d, int radius, const Rational& p_cap);

}  // namespace bergman
