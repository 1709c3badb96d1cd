#include "bergman/verify.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"
#include "bergman/kernel.hpp"

namespace bergman {

namespace {

const Exponent kTwo(2, 1);

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Independent stream per (suite, domain) derived from the master seed.
std::mt19937_64 stream(std::uint64_t seed, const std::string& suite, const Domain& d) {
  std::string key = suite + "|" + d.spec();
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (char ch : key) words.push_back(static_cast<unsigned char>(ch));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

ComplexRational random_coeff(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
  ComplexRational c;
  do {
    c = ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    c.re.canonicalize();
    c.im.canonicalize();
  } while (c.is_zero());
  return c;
}

MultiIndex random_index(std::size_t dim, std::mt19937_64& rng, int radius) {
  std::uniform_int_distribution<int> u(-radius, radius);
  MultiIndex a(dim);
  for (std::size_t i = 0; i < dim; ++i) a[i] = u(rng);
  return a;
}

bool l2_term(const Domain& d, const MultiIndex& a, const MultiIndex& g) {
  std::vector<Rational> c;
  for (std::size_t i = 0; i < a.size(); ++i) c.emplace_back(2 * (a[i] + g[i]));
  return modulus_moment_finite(d, c);
}

struct Suite {
  std::string name;
  const Domain& d;
  std::vector<CheckOutcome>& out;
  void record(bool ok, std::string detail) { out.push_back({name, d.spec(), ok, std::move(detail)}); }
};

int count(VerifyLevel level, int quick, int full) { return level == VerifyLevel::Quick ? quick : full; }

void suite_indices(const Domain& d, std::vector<CheckOutcome>& out) {
  Suite s{"indices", d, out};
  try {
    IndexReport r = index_report(d, default_window(d), Rational(kDefaultPCap));
    std::string detail = "duality " + r.duality.value.str() + ", regularity " + r.regularity.value.str() +
                         ", beta " + r.beta.value.str();
    bool ok;
    if (d.family() == Family::Hartogs) {
      Rational f = regularity_formula(d.m(), d.n());
      ok = r.duality.value == IndexValue::exact(2) && r.regularity.value == IndexValue::exact(f) &&
           r.beta.value == IndexValue::exact(f);
    } else {
      ok = r.duality.value.kind == IndexValue::Kind::Unbounded &&
           r.regularity.value.kind == IndexValue::Kind::Unbounded &&
           r.beta.value.kind == IndexValue::Kind::Unbounded;
    }
    s.record(ok, detail);
  } catch (const Error& e) {
    s.record(false, e.what());
  }
}

void suite_thresholds(const Domain& d, std::vector<CheckOutcome>& out) {
  if (d.family() != Family::Hartogs) return;
  Suite s{"thresholds", d, out};
  auto ts = thresholds(d, Exponent(1, 1), Exponent(5, 1), default_window(d));
  bool has_two = false, closed_family = true, verified = true;
  for (const Threshold& t : ts) {
    if (t.value.value() == 2 && t.direction == ThresholdDirection::EntersBelow) has_two = true;
    Rational k = Rational(2 * (d.m() + d.n())) / t.value.value();
    closed_family = closed_family && k.get_den() == 1;
    verified = verified && t.verified;
  }
  s.record(has_two && closed_family && verified,
           std::to_string(ts.size()) + " thresholds on (1,5], 2 entering from below: " + (has_two ? "yes" : "no"));
}

void suite_kernel(const Domain& d, const VerifyOptions& o, std::vector<CheckOutcome>& out) {
  Suite s{"kernel", d, out};
  auto rng = stream(o.seed, "kernel", d);
  KernelSeries series = kernel_series(d, kSeriesFallbackRadius);
  const int pairs = count(o.level, 10, 50);
  double worst = 0.0, worst_sym = 0.0;
  for (int i = 0; i < pairs; ++i) {
    auto z = random_point(d, rng), w = random_point(d, rng);
    auto kzw = series.evaluate(z, w), kwz = series.evaluate(w, z);
    worst_sym = std::max(worst_sym, std::abs(kwz - std::conj(kzw)) / std::abs(kzw));
    if (has_closed_form(d)) {
      auto cf = kernel_closed_form(d, z, w).value;
      worst = std::max(worst, std::abs(kzw - cf) / std::abs(cf));
    }
  }
  s.record(worst < 1e-8 && worst_sym < 1e-14,
           (has_closed_form(d) ? "series vs closed form " + fmt(worst) : std::string("no closed form")) +
               ", hermitian defect " + fmt(worst_sym));

  Suite r{"reproduce", d, out};
  const int radius = count(o.level, 3, 5);
  auto z = random_point(d, rng);
  int checked = 0, nonzero = 0;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (!member(d, a, kTwo)) return;
    ++checked;
    if (!reproduce_check(d, a, z, radius).exact_zero) ++nonzero;
  });
  r.record(nonzero == 0, std::to_string(checked) + " indices, " + std::to_string(nonzero) + " nonzero residuals");
}

void suite_projection(const Domain& d, const VerifyOptions& o, std::vector<CheckOutcome>& out) {
  Suite s{"projection", d, out};
  auto rng = stream(o.seed, "projection", d);
  const int trials = count(o.level, 20, 200);
  int idem = 0, adj = 0, repro = 0;
  for (int t = 0; t < trials; ++t) {
    auto f = random_mixed(d, rng, 3, 3);
    auto g = random_mixed(d, rng, 3, 3);
    LaurentPoly bf = project(d, f);
    if (!(project(d, bf.sum()) == bf)) ++idem;
    if (!(inner(d, bf.sum(), g) == inner(d, f, project(d, g).sum()))) ++adj;
    for_each_in_box(d.dim(), 2, [&](const MultiIndex& delta) {
      if (!member(d, delta, kTwo)) return;
      auto e = LaurentPoly::monomial(d, delta);
      if (!(pairing(d, f, e) == pairing(d, bf.sum(), e))) ++repro;
    });
  }
  int ident = 0;
  for_each_in_box(d.dim(), 4, [&](const MultiIndex& a) {
    if (!member(d, a, kTwo)) return;
    auto e = LaurentPoly::monomial(d, a);
    if (!(project(d, e.sum()) == e)) ++ident;
  });
  s.record(idem + adj + repro + ident == 0,
           std::to_string(trials) + " trials; failures: idempotence " + std::to_string(idem) + ", adjointness " +
               std::to_string(adj) + ", reproduction " + std::to_string(repro) + ", identity " +
               std::to_string(ident));
}

void suite_interpolation(const Domain& d, const VerifyOptions& o, std::vector<CheckOutcome>& out) {
  Suite s{"interpolation", d, out};
  auto rng = stream(o.seed, "interpolation", d);
  const int trials = count(o.level, 4, 40);
  const std::vector<Exponent> grid{Exponent(3, 2), Exponent(2, 1), Exponent(5, 2), Exponent(3, 1), Exponent(4, 1)};
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::uniform_int_distribution<int> th(1, 9);
  int lyap_fail = 0, holder_fail = 0;
  for (int t = 0; t < trials; ++t) {
    Exponent p = grid[pick(rng)], q = grid[pick(rng)];
    auto f = random_laurent(d, rng, p, q, 2, 2);
    if (!lyapunov_check(d, f, p, q, Rational(th(rng), 10), o.quad).holds) ++lyap_fail;
    Exponent hp = grid[pick(rng)];
    Exponent hq = conjugate_exponent(hp);
    auto a = random_laurent(d, rng, hp, hp, 2, 2);
    auto b = random_laurent(d, rng, hq, hq, 2, 2);
    if (!holder_check(d, a, b, hp, o.quad).holds) ++holder_fail;
  }
  s.record(lyap_fail + holder_fail == 0, std::to_string(trials) + " trials; lyapunov failures " +
                                             std::to_string(lyap_fail) + ", hoelder failures " +
                                             std::to_string(holder_fail));
}

void suite_density(const Domain& d, const VerifyOptions& o, std::vector<CheckOutcome>& out) {
  Suite s{"density", d, out};
  bool ok = true;
  std::string detail;
  if (d.family() == Family::Polydisc && d.dim() == 1) {
    for (int a = 0; a <= 3; ++a) {
      double prev = std::numeric_limits<double>::infinity(), last = 0.0, norm = 0.0;
      for (int k : {1, 2, 4, 8, 16}) {
        std::vector<std::vector<std::complex<double>>> pts;
        for (int j = 0; j < k; ++j) pts.push_back({std::polar(0.5, 2.0 * std::numbers::pi * j / k)});
        DensityResult r = density_residual(d, MultiIndex{a}, pts);
        ok = ok && r.residual >= 0 && r.residual <= prev + 1e-12 * r.norm_sq;
        prev = r.residual;
        last = r.residual;
        norm = r.norm_sq;
      }
      ok = ok && last < 1e-3 * norm;
      detail += (a ? ", " : "") + std::string("alpha=") + std::to_string(a) + " k=16 residual " + fmt(last);
    }
  } else {
    auto rng = stream(o.seed, "density", d);
    std::vector<std::vector<std::complex<double>>> pts;
    double prev = std::numeric_limits<double>::infinity();
    MultiIndex a(d.dim());
    for (int k = 1; k <= 4; ++k) {
      pts.push_back(random_point(d, rng, 0.5));
      DensityResult r = density_residual(d, a, pts);
      ok = ok && r.residual >= 0 && r.residual <= prev + 1e-12 * r.norm_sq;
      prev = r.residual;
    }
    detail = "nested random point sets, k=1..4, final residual " + fmt(prev);
  }
  s.record(ok, detail);
}

void suite_kernel_norm(const Domain& d, const VerifyOptions& o, std::vector<CheckOutcome>& out) {
  Suite s{"kernel-pnorm", d, out};
  if (d.family() == Family::Polydisc && d.dim() == 1) {
    std::vector<std::complex<double>> z{0.0};
    auto r = kernel_pnorm_estimate(d, z, Exponent(3, 1), 0, o.quad);
    double expect = std::pow(std::numbers::pi, 1.0 / 3.0 - 1.0);
    s.record(!r.diverging && std::abs(r.value - expect) < 1e-8 * expect, "||K(.,0)||_3 = " + fmt(r.value));
  } else if (d.family() == Family::Hartogs && d.m() == 1 && d.n() == 1) {
    std::vector<std::complex<double>> z{0.0, 0.5};
    std::vector<Exponent> ps{Exponent(3, 1), Exponent(5, 1)};
    if (o.level == VerifyLevel::Full) ps = {Exponent(3, 1), Exponent(7, 2), Exponent(9, 2), Exponent(5, 1)};
    bool ok = true;
    std::string detail;
    for (const Exponent& p : ps) {
      auto r = kernel_pnorm_estimate(d, z, p, kSeriesFallbackRadius, o.quad);
      bool expect_div = p.value() > 4;
      ok = ok && r.diverging == expect_div;
      detail += (detail.empty() ? "" : ", ") + std::string("p=") + p.str() + (r.diverging ? " diverging" : " finite");
    }
    s.record(ok, detail);
  }
}

void suite_witness(const Domain& d, std::vector<CheckOutcome>& out) {
  if (d.family() != Family::Hartogs) return;
  Suite s{"regularity-witness", d, out};
  RegularityResult r = regularity_probe(d, default_window(d));
  Rational f = regularity_formula(d.m(), d.n());
  int bad = 0;
  for (int k = 1; k <= 50; ++k) {
    Rational below = f - make_rational(k, 100), above = f + make_rational(k - 1, 25);
    if (projection_ratio(d, *r.alpha, *r.gamma, Exponent(below)).divergent) ++bad;
    if (!projection_ratio(d, *r.alpha, *r.gamma, Exponent(above)).divergent) ++bad;
  }
  s.record(bad == 0, "witness alpha=" + r.alpha->str() + " gamma=" + r.gamma->str() + ", grid failures " +
                         std::to_string(bad));
}

void suite_injectivity(const Domain& d, std::vector<CheckOutcome>& out) {
  Suite s{"injectivity", d, out};
  const int radius = default_window(d);
  bool ok = !injectivity_witness_scan(d, kTwo, radius).has_value();
  std::string detail = "p=2: none";
  IndexResult db = duality_bound(d, radius, Rational(kDefaultPCap));
  if (db.value.kind == IndexValue::Kind::Exact) {
    Rational p = db.value.value + Rational(1, 2);
    auto w = injectivity_witness_scan(d, Exponent(p), radius);
    ok = ok && w.has_value();
    detail += "; p=" + to_string(p) + ": " + (w ? w->str() : std::string("none"));
  } else {
    bool any = injectivity_witness_scan(d, Exponent(4, 1), radius).has_value();
    ok = ok && !any;
    detail += "; p=4: none expected";
  }
  s.record(ok, detail);
}

}  // namespace

Moment reference_moment(const Domain& d, const MultiIndex& alpha, const Exponent& p) { return moment(d, alpha, p); }

std::vector<Exponent> bootstrap_exponents() {
  return {Exponent(1, 1), Exponent(3, 2), Exponent(2, 1), Exponent(5, 2), Exponent(3, 1), Exponent(4, 1)};
}

namespace {

// The most violated constraint is exactly zero.
bool on_boundary(const Domain& d, const MultiIndex& a, const Exponent& p) {
  std::optional<Rational> lowest;
  for (const FinitenessConstraint& fc : d.finiteness_constraints()) {
    Rational v(fc.b);
    for (std::size_t i = 0; i < a.size(); ++i) v += fc.a[i] * a[i] * p.value();
    if (!lowest || v < *lowest) lowest = v;
  }
  return lowest && *lowest == 0;
}

}  // namespace

BootstrapStats bootstrap(const Domain& d, const std::vector<Exponent>& ps, int radius, const QuadConfig& cfg,
                         const MomentFn& moments) {
  BootstrapStats st;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    for (const Exponent& p : ps) {
      std::vector<double> c;
      for (int x : a) c.push_back(x * p.as_double());
      Integrand g = Integrand::modulus_monomial(c);
      Moment m = moments(d, a, p);
      if (m.is_finite()) {
        ++st.finite;
        double exact = m.to_double();
        double rel = std::abs(integrate(d, g, cfg).value - exact) / std::abs(exact);
        if (!(rel <= kBootstrapTolerance)) ++st.finite_misses;
        if (!(rel <= st.worst_relative_error)) {
          st.worst_relative_error = rel;
          st.worst_at = a.str() + " p=" + p.str();
        }
      } else {
        ++st.divergent;
        ProbeResult r = probe_integral(d, g, cfg);
        if (r.verdict != ProbeVerdict::Diverging) ++st.divergence_misses;
        bool tenfold = std::all_of(r.growth.begin(), r.growth.end(), [](double x) { return x >= 10.0; });
        if (!tenfold) {
          ++st.tenfold_misses;
          if (on_boundary(d, a, p)) ++st.tenfold_misses_on_boundary;
        }
      }
    }
  });
  return st;
}

bool VerifyReport::passed() const {
  if (!bootstrap_passed) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

VerifyReport verify(const VerifyOptions& o) {
  VerifyReport rep;
  rep.bootstrap_passed = true;
  for (const Domain& d : o.domains) {
    // the full window is affordable up to dimension two
    const bool small = d.dim() <= 2;
    std::vector<Exponent> ps = small ? bootstrap_exponents() : std::vector<Exponent>{kTwo};
    BootstrapStats st = bootstrap(d, ps, small ? 6 : 1, o.quad, o.moments);
    std::string detail = std::to_string(st.finite) + " finite (worst " + fmt(st.worst_relative_error) + "), " +
                         std::to_string(st.divergent) + " divergent (" + std::to_string(st.divergence_misses) +
                         " missed)";
    rep.checks.push_back({"bootstrap", d.spec(), st.passed(), detail});
    rep.bootstrap_passed = rep.bootstrap_passed && st.passed();
  }
  if (!rep.bootstrap_passed) return rep;

  for (const Domain& d : o.domains) {
    auto guarded = [&](const char* name, auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        rep.checks.push_back({name, d.spec(), false, e.what()});
      }
    };
    guarded("indices", [&] { suite_indices(d, rep.checks); });
    guarded("thresholds", [&] { suite_thresholds(d, rep.checks); });
    guarded("kernel", [&] { suite_kernel(d, o, rep.checks); });
    guarded("projection", [&] { suite_projection(d, o, rep.checks); });
    guarded("interpolation", [&] { suite_interpolation(d, o, rep.checks); });
    guarded("density", [&] { suite_density(d, o, rep.checks); });
    guarded("kernel-pnorm", [&] { suite_kernel_norm(d, o, rep.checks); });
    guarded("regularity-witness", [&] { suite_witness(d, rep.checks); });
    guarded("injectivity", [&] { suite_injectivity(d, rep.checks); });
  }
  return rep;
}

MixedMonomialSum random_mixed(const Domain& d, std::mt19937_64& rng, int radius, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  MixedMonomialSum f(d.dim());
  const int want = nterms(rng);
  while (static_cast<int>(f.size()) < want) {
    MultiIndex a = random_index(d.dim(), rng, radius), g = random_index(d.dim(), rng, radius);
    if (l2_term(d, a, g)) f.add(random_coeff(rng), a, g);
  }
  return f;
}

LaurentPoly random_laurent(const Domain& d, std::mt19937_64& rng, const Exponent& p, const Exponent& q,
                           int radius, int max_terms) {
  std::vector<MultiIndex> pool;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& a) {
    if (member(d, a, p) && member(d, a, q)) pool.push_back(a);
  });
  if (pool.empty()) throw DomainError("no monomial of the window lies in both spaces");
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  MixedMonomialSum f(d.dim());
  MultiIndex zero(d.dim());
  const int want = std::min<int>(nterms(rng), static_cast<int>(pool.size()));
  while (static_cast<int>(f.size()) < want) f.add(random_coeff(rng), pool[pick(rng)], zero);
  return LaurentPoly::from(d, std::move(f));
}

std::vector<std::complex<double>> random_point(const Domain& d, std::mt19937_64& rng, double cap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = d.dim();
  std::vector<double> r(n);
  switch (d.family()) {
    case Family::Polydisc:
      for (auto& ri : r) ri = cap * u(rng);
      break;
    case Family::Ball: {
      double s = 0.0;
      for (auto& ri : r) {
        ri = u(rng) + 1e-3;
        s += ri * ri;
      }
      double scale = cap * u(rng) / std::sqrt(s);
      for (auto& ri : r) ri *= scale;
      break;
    }
    case Family::Hartogs:
      r[1] = cap * (0.05 + 0.95 * u(rng));
      r[0] = cap * u(rng) * std::pow(r[1], static_cast<double>(d.n()) / d.m());
      break;
  }
  std::vector<std::complex<double>> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::polar(r[i], 2.0 * std::numbers::pi * u(rng));
  return z;
}

}  // namespace bergman
