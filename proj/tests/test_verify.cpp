#include <algorithm>
#include <set>

#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"
#include "bergman/verify.hpp"
#include "doctest.h"

using namespace bergman;

namespace {

// Scales finite moments by (1 + eps) wherever alpha_1 is odd.
MomentFn skewed(double eps) {
  return [eps](const Domain& d, const MultiIndex& a, const Exponent& p) {
    Moment m = reference_moment(d, a, p);
    if (!m.is_finite() || a[0] % 2 == 0) return m;
    ExactValue v = m.value();
    v.coeff *= rational_from_double(1.0 + eps);
    return Moment::finite(v);
  };
}

const CheckOutcome* find(const VerifyReport& r, const std::string& suite, const std::string& domain) {
  for (const CheckOutcome& c : r.checks)
    if (c.suite == suite && c.domain == domain) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("bootstrap agrees with the moment formulas") {
  for (const Domain& d : {Domain::polydisc(2), Domain::ball(2), Domain::hartogs(1, 2)}) {
    BootstrapStats st = bootstrap(d, bootstrap_exponents(), 3, QuadConfig{});
    CHECK(st.passed());
    CHECK(st.finite > 0);
    CHECK(st.divergent > 0);
    CHECK(st.worst_relative_error < kBootstrapTolerance);
  }
  BootstrapStats ball3 = bootstrap(Domain::ball(3), {Exponent(2, 1)}, 1, QuadConfig{});
  CHECK(ball3.passed());
  CHECK(bootstrap_exponents().size() == 6);
}

TEST_CASE("bootstrap rejects a perturbed moment formula") {
  Domain d = Domain::hartogs(1, 1);
  BootstrapStats st = bootstrap(d, {Exponent(2, 1)}, 2, QuadConfig{}, skewed(1e-6));
  CHECK_FALSE(st.passed());
  CHECK(st.finite_misses > 0);
  CHECK(st.worst_at.find("p=2") != std::string::npos);

  // a formula that declares a finite moment divergent is caught by the probe
  MomentFn lying = [](const Domain& dd, const MultiIndex& a, const Exponent& p) {
    if (a == MultiIndex{0, 0}) return Moment::divergent();
    return reference_moment(dd, a, p);
  };
  BootstrapStats lie = bootstrap(d, {Exponent(2, 1)}, 1, QuadConfig{}, lying);
  CHECK(lie.divergence_misses == 1);
  CHECK_FALSE(lie.passed());
}

TEST_CASE("verify stops after a failed bootstrap") {
  VerifyOptions o;
  o.domains = {Domain::hartogs(1, 1), Domain::polydisc(1)};
  o.moments = skewed(1e-6);
  VerifyReport r = verify(o);
  CHECK_FALSE(r.bootstrap_passed);
  CHECK_FALSE(r.passed());
  std::set<std::string> suites;
  for (const CheckOutcome& c : r.checks) suites.insert(c.suite);
  CHECK(suites == std::set<std::string>{"bootstrap"});
  const CheckOutcome* h = find(r, "bootstrap", "hartogs:1/1");
  REQUIRE(h);
  CHECK_FALSE(h->passed);
}

TEST_CASE("verify passes on the index chain of hartogs 3/2") {
  VerifyOptions o;
  o.domains = {Domain::hartogs(3, 2)};
  o.seed = 11;
  VerifyReport r = verify(o);
  CHECK(r.bootstrap_passed);
  for (const CheckOutcome& c : r.checks) {
    INFO(c.suite << ": " << c.detail);
    CHECK(c.passed);
  }
  const CheckOutcome* idx = find(r, "indices", "hartogs:3/2");
  REQUIRE(idx);
  CHECK(idx->detail == "duality 2, regularity 5/2, beta 5/2");
  CHECK(find(r, "regularity-witness", "hartogs:3/2"));
  CHECK(find(r, "thresholds", "hartogs:3/2"));
  CHECK_FALSE(find(r, "kernel-pnorm", "hartogs:3/2"));
}

TEST_CASE("verify covers every suite on the default domains and is reproducible") {
  VerifyOptions o;
  o.domains = {Domain::polydisc(1), Domain::ball(2), Domain::hartogs(1, 1)};
  o.seed = 3;
  VerifyReport a = verify(o);
  CHECK(a.passed());
  for (const char* suite : {"bootstrap", "indices", "kernel", "reproduce", "projection", "interpolation", "density",
                            "injectivity"})
    for (const Domain& d : o.domains) CHECK(find(a, suite, d.spec()));
  CHECK(find(a, "kernel-pnorm", "hartogs:1/1"));

  VerifyReport b = verify(o);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].detail == b.checks[i].detail);
}

TEST_CASE("random generators respect membership and the point cap") {
  std::mt19937_64 rng(5);
  for (const Domain& d : {Domain::polydisc(2), Domain::ball(3), Domain::hartogs(2, 3)}) {
    for (int t = 0; t < 50; ++t) {
      MixedMonomialSum f = random_mixed(d, rng, 3, 4);
      CHECK(f.size() >= 1);
      CHECK(f.size() <= 4);
      for (const MixedTerm& term : f.term_list()) {
        MultiIndex s = term.alpha;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += term.gamma[i];
        CHECK(moment_finite(d, s, Exponent(2, 1)));
      }

      LaurentPoly g = random_laurent(d, rng, Exponent(3, 2), Exponent(4, 1), 2, 3);
      for (const MixedTerm& term : g.sum().term_list()) {
        CHECK(member(d, term.alpha, Exponent(3, 2)));
        CHECK(member(d, term.alpha, Exponent(4, 1)));
      }

      auto z = random_point(d, rng);
      std::vector<double> r;
      for (auto zi : z) r.push_back(std::abs(zi));
      CHECK(shadow_contains(d, r));
    }
  }
}
