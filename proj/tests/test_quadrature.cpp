#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bergman;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Integrand monomial_integrand(const MultiIndex& a, const Exponent& p) {
  std::vector<double> c;
  for (int ai : a) c.push_back(p.as_double() * ai);
  return Integrand::modulus_monomial(c);
}

}  // namespace

TEST_CASE("integrate examples") {
  QuadConfig cfg;
  QuadResult h = integrate(Domain::hartogs(1, 1), Integrand::modulus_monomial({0, 0}), cfg);
  CHECK(std::abs(h.value - kPi * kPi / 2) < 1e-10);
  CHECK(h.error_estimate < 1e-10);

  QuadResult p = integrate(Domain::polydisc(2), Integrand::modulus_monomial({4, 2}), cfg);
  CHECK(std::abs(p.value - kPi * kPi / 6) < 1e-12);

  QuadResult b = integrate(Domain::ball(2), Integrand::modulus_monomial({2, 0}), cfg);
  CHECK(std::abs(b.value - kPi * kPi / 6) < 1e-10);
}

TEST_CASE("lp_norm examples") {
  QuadConfig cfg;
  Domain h = Domain::hartogs(1, 1);
  for (const MultiIndex& a : {MultiIndex{0, -1}, MultiIndex{2, 1}, MultiIndex{1, -2}})
    for (Exponent p : {Exponent(1, 1), Exponent(3, 2), Exponent(5, 2)}) {
      Moment m = moment(h, a, p);
      if (!m.is_finite()) continue;
      double n = lp_norm(h, Function::from(MixedMonomialSum::monomial(a)), p.as_double(), cfg);
      CHECK(rel(n, std::pow(m.to_double(), 1 / p.as_double())) < 1e-8);
    }

  Function zero{[](Point) { return cd(0.0); }, 0, true};
  CHECK(lp_norm(h, zero, 3.0, cfg) == 0.0);

  double zb = lp_norm(h, Function::from(MixedMonomialSum::mixed({0, 0}, {0, 1})), 6.0, cfg);
  CHECK(rel(zb, std::pow(4 * kPi * kPi / 20, 1.0 / 6)) < 1e-10);
}

TEST_CASE("lp_norm of a two-term function against an independent oracle") {
  // f = 1/z2 + z1/2 on hartogs:1/1; |f| depends on theta1 + theta2 only and stays >= 1/2 in units of 1/|z2|
  const double p = 3.0;
  auto radial = [&](double phi) {
    return oracle::ts(
        [&](double r2) {
          return oracle::ts(
              [&](double u) {
                // |1/r2 + r1 e^{i phi}|^p r1 dr1 r2 dr2 with r1 = u r2, cleared of the 1/r2 pole
                double v = std::abs(1.0 + std::polar(0.5 * u * r2 * r2, phi));
                return std::pow(v, p) * u * std::pow(r2, 3.0 - p);
              },
              0.0, 1.0);
        },
        0.0, 1.0);
  };
  double ref = 2 * kPi * oracle::gk(radial, 0.0, 2 * kPi);
  MixedMonomialSum f(2);
  f.add(Rational(1), {0, -1}, {0, 0});
  f.add(Rational(1, 2), {1, 0}, {0, 0});
  double n = lp_norm(Domain::hartogs(1, 1), Function::from(f), p, QuadConfig{});
  CHECK(rel(n, std::cbrt(ref)) < 1e-9);
}

TEST_CASE("divergence probe examples") {
  QuadConfig cfg;
  Domain h = Domain::hartogs(1, 1);
  Function inv = Function::from(MixedMonomialSum::monomial({0, -1}));
  DivergenceProbe d4 = divergence_probe(h, inv, 4.0, cfg);
  CHECK(d4.diverging);
  DivergenceProbe d3 = divergence_probe(h, inv, 3.0, cfg);
  CHECK_FALSE(d3.diverging);
  CHECK(rel(d3.value, std::cbrt(2 * kPi * kPi)) < 1e-9);
  CHECK(d3.sequence.size() == static_cast<std::size_t>(cfg.refinement_levels + 1));

  Function one = Function::from(MixedMonomialSum::monomial({0}));
  for (double p : {1.0, 2.0, 7.0}) {
    DivergenceProbe d = divergence_probe(Domain::polydisc(1), one, p, cfg);
    CHECK_FALSE(d.diverging);
    CHECK(rel(d.value, std::pow(kPi, 1 / p)) < 1e-10);
  }
  CHECK_THROWS_AS(divergence_probe(h, inv, 0.0, cfg), DomainError);
}

TEST_CASE("moments agree with quadrature and divergent moments grow under refinement") {
  std::mt19937_64 rng(77);
  std::vector<Domain> ds = {Domain::polydisc(1), Domain::polydisc(2), Domain::ball(1), Domain::ball(2),
                            Domain::hartogs(1, 1), Domain::hartogs(1, 2), Domain::hartogs(2, 1), Domain::hartogs(3, 2)};
  std::uniform_int_distribution<int> pick_d(0, static_cast<int>(ds.size()) - 1), pick_a(-6, 6), pick_p(4, 24);
  QuadConfig cfg;
  cfg.refinement_levels = 2;  // cutoffs 1e-2, 1e-4, 1e-6
  int finite = 0, divergent = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Domain& d = ds[pick_d(rng)];
    MultiIndex a(d.dim());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = pick_a(rng);
    Exponent p(pick_p(rng), 4);
    Moment m = moment(d, a, p);
    Integrand g = monomial_integrand(a, p);
    if (m.is_finite()) {
      ++finite;
      worst = std::max(worst, rel(integrate(d, g, cfg).value, m.to_double()));
    } else {
      ++divergent;
      ProbeResult r = probe_integral(d, g, cfg);
      CHECK_MESSAGE(r.verdict == ProbeVerdict::Diverging, d.spec() << " " << a.str() << " p=" << p.str());
      for (std::size_t k = 1; k < r.log_integrals.size(); ++k) CHECK(r.log_integrals[k] > r.log_integrals[k - 1]);
    }
  }
  CHECK(finite > 200);
  CHECK(divergent > 200);
  CHECK(worst < 1e-8);
}

TEST_CASE("cut-off sequences of monomials are monotone") {
  QuadConfig cfg;
  for (const Domain& d : {Domain::polydisc(2), Domain::ball(2), Domain::hartogs(1, 1), Domain::hartogs(2, 3)}) {
    for_each_in_box(2, 2, [&](const MultiIndex& a) {
      ProbeResult r = probe_integral(d, monomial_integrand(a, Exponent(3, 1)), cfg);
      for (std::size_t k = 1; k < r.log_integrals.size(); ++k)
        CHECK(r.log_integrals[k] >= r.log_integrals[k - 1] - 1e-14);
      bool finite = moment(d, a, Exponent(3, 1)).is_finite();
      CHECK((r.verdict == ProbeVerdict::Stable) == finite);
    });
  }
}

TEST_CASE("angular rule is exact above the declared bandwidth") {
  // |f|^2 for f = z1^2 + 3 conj(z2) + z1 z2^-1 on hartogs:2/3 has bandwidth 2 * 3 = 6
  MixedMonomialSum f(2);
  f.add(Rational(1), {2, 0}, {0, 0});
  f.add(Rational(3), {0, 0}, {0, 1});
  f.add(ComplexRational(Rational(0), Rational(1)), {1, -1}, {0, 0});
  Integrand g = Integrand::modulus_power(f, 2.0);
  REQUIRE(g.bandwidth);
  const int B = *g.bandwidth;
  Domain d = Domain::hartogs(2, 3);
  QuadConfig base;
  base.radial_nodes = 24;
  base.tolerance = 1.0;  // keep the radial rule fixed across the comparison
  base.angular_nodes = 2 * B + 2;
  double v0 = integrate(d, g, base).value;
  for (int nodes : {2 * B + 3, 3 * B + 3, 4 * B + 4}) {
    QuadConfig c = base;
    c.angular_nodes = nodes;
    CHECK(rel(integrate(d, g, c).value, v0) < 1e-13);
  }
}

TEST_CASE("integration is symmetric under coordinate permutations") {
  QuadConfig cfg;
  std::vector<std::vector<double>> cs = {{0.5, 2.0, -0.25}, {3.0, 0.0, 1.0}, {-1.5, 1.0, 4.0}};
  for (const Domain& d : {Domain::polydisc(3), Domain::ball(3)}) {
    for (auto c : cs) {
      std::sort(c.begin(), c.end());
      double ref = integrate(d, Integrand::modulus_monomial(c), cfg).value;
      do {
        double v = integrate(d, Integrand::modulus_monomial(c), cfg).value;
        CHECK(rel(v, ref) < 1e-12);
      } while (std::next_permutation(c.begin(), c.end()));
    }
  }
  // a mixed integrand on the ball: |z1 + 2 z2|^4 against |2 z1 + z2|^4
  MixedMonomialSum f(2), g(2);
  f.add(Rational(1), {1, 0}, {0, 0});
  f.add(Rational(2), {0, 1}, {0, 0});
  g.add(Rational(2), {1, 0}, {0, 0});
  g.add(Rational(1), {0, 1}, {0, 0});
  double a = integrate(Domain::ball(2), Integrand::modulus_power(f, 4.0), cfg).value;
  double b = integrate(Domain::ball(2), Integrand::modulus_power(g, 4.0), cfg).value;
  CHECK(rel(a, b) < 1e-12);
}

TEST_CASE("results are bit-identical across thread counts") {
  MixedMonomialSum f(2);
  f.add(Rational(1), {0, -1}, {0, 0});
  f.add(ComplexRational(Rational(1, 3), Rational(2)), {2, 1}, {1, 0});
  Domain d = Domain::hartogs(1, 2);
  QuadConfig cfg;
  cfg.radial_nodes = 16;
  std::vector<double> out;
  for (unsigned t : {1u, 2u, 4u, 8u}) {
    set_thread_count(t);
    out.push_back(integrate(d, Integrand::modulus_power(f, 2.5), cfg).value);
    double ps[] = {1.5, 3.0};
    auto ns = lp_norms(d, Function::from(f), ps, cfg);
    out.insert(out.end(), ns.begin(), ns.end());
  }
  set_thread_count(0);
  for (std::size_t k = 3; k < out.size(); ++k) CHECK(out[k] == out[k % 3]);
}

TEST_CASE("tree_sum has a fixed shape") {
  // leaves of at most 8 entries are summed left to right, then halves are combined
  std::vector<double> v(16, 1.0);
  v[0] = 1e16;
  v[8] = -1e16;
  double left = 1e16, right = -1e16;
  for (int i = 1; i < 8; ++i) left += 1.0, right += 1.0;
  CHECK(tree_sum(v) == left + right);
  CHECK(tree_sum(std::vector<double>{}) == 0.0);
  CHECK(tree_sum(std::vector<double>{2.5}) == 2.5);
}

TEST_CASE("configuration validation") {
  Domain d = Domain::polydisc(1);
  Integrand g = Integrand::modulus_monomial({0});
  auto bad = [&](auto mutate) {
    QuadConfig c;
    mutate(c);
    CHECK_THROWS_AS(integrate(d, g, c), DomainError);
  };
  bad([](QuadConfig& c) { c.radial_nodes = 3; });
  bad([](QuadConfig& c) { c.angular_nodes = 2; });
  bad([](QuadConfig& c) { c.corner_cutoff = 0.5; });
  bad([](QuadConfig& c) { c.corner_cutoff = -0.1; });
  bad([](QuadConfig& c) { c.refinement_levels = 1; });
  bad([](QuadConfig& c) { c.tolerance = 0.0; });
  QuadConfig s = QuadConfig{}.scaled_nodes(2);
  CHECK(s.radial_nodes == 127);
}

TEST_CASE("non-finite integrand values are reported") {
  Integrand g = Integrand::from_value([](Point) { return std::nan(""); }, 0);
  CHECK_THROWS_AS(integrate(Domain::polydisc(1), g, QuadConfig{}), DomainError);
}

TEST_CASE("corner cutoff removes only a small region") {
  QuadConfig c;
  c.corner_cutoff = 1e-6;
  for (const Domain& d : {Domain::polydisc(2), Domain::ball(2), Domain::hartogs(1, 1)}) {
    double full = volume(d).to_double();
    double cut = integrate(d, Integrand::modulus_monomial({0, 0}), c).value;
    CHECK(cut < full);
    CHECK(rel(cut, full) < 1e-5);
  }
}
