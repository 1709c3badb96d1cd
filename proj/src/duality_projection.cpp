#include "bergman/duality_projection.hpp"

#include <cmath>
#include <numbers>

#include "bergman/errors.hpp"
#include "bergman/index_sets.hpp"

namespace bergman {

namespace {

const Exponent kTwo(2, 1);

std::vector<Rational> modulus_vector(const MultiIndex& a, const MultiIndex& b, const Rational& scale) {
  std::vector<Rational> c;
  c.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c.emplace_back(scale * (a[i] + b[i]));
  return c;
}

// Rational part of a moment known to be a rational multiple of pi^k.
Rational rational_part(const Moment& m) {
  const ExactValue& v = m.value();
  if (!v.is_rational_pi()) throw Error("internal: moment at an even exponent vector carries Gamma factors");
  return v.coeff;
}

double magnitude(const ComplexRational& c) { return std::hypot(c.re.get_d(), c.im.get_d()); }

void require_in(const Domain& d, const LaurentPoly& f, const Exponent& p, const char* what) {
  for (const auto& [key, c] : f.sum().terms())
    if (!member(d, key.first, p))
      throw NotIntegrable(std::string(what) + ": z^" + key.first.str() + " is not in A^" + p.str() + " of " +
                          d.spec());
}

}  // namespace

std::complex<double> ExactComplex::to_complex() const {
  return coeff.to_complex() * std::pow(std::numbers::pi, pi_power);
}

std::string ExactComplex::str() const {
  std::string s = "(" + to_string(coeff.re) + (coeff.im < 0 ? " - " : " + ") + to_string(abs(coeff.im)) + "i)";
  if (coeff.is_zero() || pi_power == 0) return s;
  return s + "*pi^" + std::to_string(pi_power);
}

ExactComplex inner(const Domain& d, const MixedMonomialSum& f, const MixedMonomialSum& g) {
  if (f.dim() != static_cast<std::size_t>(d.dim()) || g.dim() != static_cast<std::size_t>(d.dim()))
    throw DimensionError("inner product operands do not match the dimension of " + d.spec());
  ExactComplex out{ComplexRational(), d.pi_power()};
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      // f_i conj(g_j) = cf conj(cg) z^(a + g') conj(z)^(g + a')
      auto mod = modulus_vector(kf.first + kf.second, kg.first + kg.second, Rational(1));
      if (!modulus_moment_finite(d, mod))
        throw NotIntegrable("cross term of z^" + kf.first.str() + "conj(z)^" + kf.second.str() + " and z^" +
                            kg.first.str() + "conj(z)^" + kg.second.str() + " is not integrable on " + d.spec());
      if (kf.first + kg.second != kf.second + kg.first) continue;
      Rational m = rational_part(modulus_moment(d, mod));
      out.coeff += cf * cg.conj() * m;
    }
  }
  return out;
}

ExactComplex pairing(const Domain& d, const MixedMonomialSum& f, const LaurentPoly& g) { return inner(d, f, g.sum()); }

std::vector<ProjectedTerm> projection_terms(const Domain& d, const MixedMonomialSum& f) {
  if (f.dim() != static_cast<std::size_t>(d.dim())) throw DimensionError("function dimension mismatch");
  std::vector<ProjectedTerm> out;
  for (const MixedTerm& t : f.term_list()) {
    if (!modulus_moment_finite(d, modulus_vector(t.alpha, t.gamma, Rational(2))))
      throw NotIntegrable("z^" + t.alpha.str() + "conj(z)^" + t.gamma.str() + " is not in L^2 of " + d.spec());
    ProjectedTerm pt{t, t.alpha - t.gamma, std::nullopt};
    if (member(d, pt.delta, kTwo)) {
      Rational num = rational_part(moment(d, t.alpha, kTwo));
      Rational den = rational_part(moment(d, pt.delta, kTwo));
      pt.multiplier = Rational(num / den);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

LaurentPoly project(const Domain& d, const MixedMonomialSum& f) {
  MixedMonomialSum out(d.dim());
  MultiIndex zero(d.dim());
  for (const ProjectedTerm& pt : projection_terms(d, f))
    if (pt.multiplier) out.add(pt.input.coeff * *pt.multiplier, pt.delta, zero);
  return LaurentPoly::from(d, std::move(out));
}

ProjectionRatio projection_ratio(const Domain& d, const MultiIndex& alpha, const MultiIndex& gamma,
                                 const Exponent& p) {
  require_dim(d, alpha);
  require_dim(d, gamma);
  if (!modulus_moment_finite(d, modulus_vector(alpha, gamma, Rational(2))))
    throw NotIntegrable("z^" + alpha.str() + "conj(z)^" + gamma.str() + " is not in L^2 of " + d.spec());
  Moment f_norm = modulus_moment(d, modulus_vector(alpha, gamma, p.value()));
  if (f_norm.is_divergent())
    throw NotIntegrable("z^" + alpha.str() + "conj(z)^" + gamma.str() + " is not in L^" + p.str() + " of " +
                        d.spec());

  auto terms = projection_terms(d, MixedMonomialSum::mixed(alpha, gamma));
  ProjectionRatio r;
  r.delta = alpha - gamma;
  if (!terms.front().multiplier) return r;  // B f = 0
  r.multiplier = *terms.front().multiplier;
  Moment bf_norm = moment(d, r.delta, p);
  if (bf_norm.is_divergent()) {
    r.divergent = true;
    return r;
  }
  const double inv_p = 1.0 / p.as_double();
  r.ratio = r.multiplier.get_d() * std::exp(inv_p * (bf_norm.value().log_value() - f_norm.value().log_value()));
  return r;
}

std::optional<double> exact_norm(const Domain& d, const LaurentPoly& f, const Exponent& p) {
  const auto& terms = f.sum().terms();
  if (terms.empty()) return 0.0;
  if (terms.size() == 1) {
    const auto& [key, c] = *terms.begin();
    Moment m = moment(d, key.first, p);
    if (m.is_divergent()) return std::nullopt;
    return magnitude(c) * std::exp(m.value().log_value() / p.as_double());
  }
  if (p == kTwo) return std::sqrt(inner(d, f.sum(), f.sum()).to_complex().real());
  return std::nullopt;
}

namespace {

// Norms of f at several exponents; exact where possible, quadrature otherwise.
std::vector<double> norms(const Domain& d, const LaurentPoly& f, const std::vector<Exponent>& ps,
                          const QuadConfig& cfg, bool& all_exact) {
  std::vector<double> out(ps.size());
  std::vector<double> numeric_p;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (auto v = exact_norm(d, f, ps[i])) {
      out[i] = *v;
    } else {
      numeric_p.push_back(ps[i].as_double());
      slots.push_back(i);
    }
  }
  all_exact = numeric_p.empty();
  if (!numeric_p.empty()) {
    auto v = lp_norms(d, Function::from(f.sum()), numeric_p, cfg);
    for (std::size_t k = 0; k < slots.size(); ++k) out[slots[k]] = v[k];
  }
  return out;
}

bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + kInequalityTolerance) + 1e-300; }

}  // namespace

InequalityCheck lyapunov_check(const Domain& d, const LaurentPoly& f, const Exponent& p, const Exponent& q,
                               const Rational& theta, const QuadConfig& cfg) {
  if (!(theta > 0 && theta < 1)) throw DomainError("theta must lie strictly between 0 and 1");
  require_in(d, f, p, "lyapunov");
  require_in(d, f, q, "lyapunov");
  Rational inv = (1 - theta) / p.value() + theta / q.value();
  Exponent p_theta(Rational(1 / inv));
  const double th = theta.get_d();

  InequalityCheck res;
  QuadConfig c = cfg;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto v = norms(d, f, {p_theta, p, q}, c, res.exact);
    res.lhs = v[0];
    res.rhs = std::pow(v[1], 1.0 - th) * std::pow(v[2], th);
    res.holds = within(res.lhs, res.rhs);
    if (res.holds || res.exact) break;
    c = cfg.scaled_nodes(4);
    res.retries = attempt + 1;
  }
  return res;
}

InequalityCheck holder_check(const Domain& d, const LaurentPoly& f, const LaurentPoly& g, const Exponent& p,
                             const QuadConfig& cfg) {
  Exponent q = conjugate_exponent(p);
  require_in(d, f, p, "hoelder");
  require_in(d, g, q, "hoelder");
  InequalityCheck res;
  res.lhs = std::abs(pairing(d, f.sum(), g).to_complex());
  QuadConfig c = cfg;
  for (int attempt = 0; attempt < 2; ++attempt) {
    bool ef = false, eg = false;
    double nf = norms(d, f, {p}, c, ef)[0];
    double ng = norms(d, g, {q}, c, eg)[0];
    res.exact = ef && eg;
    res.rhs = nf * ng;
    res.holds = within(res.lhs, res.rhs);
    if (res.holds || res.exact) break;
    c = cfg.scaled_nodes(4);
    res.retries = attempt + 1;
  }
  return res;
}

std::optional<MultiIndex> injectivity_witness_scan(const Domain& d, const Exponent& p, int radius) {
  if (p < kTwo) throw DomainError("injectivity scan requires p >= 2");
  if (radius < 0) throw DomainError("window radius must be non-negative");
  Exponent q = conjugate_exponent(p);
  std::optional<MultiIndex> found;
  for_each_in_box(d.dim(), radius, [&](const MultiIndex& g) {
    if (!found && member(d, g, q) && !member(d, g, p)) found = g;
  });
  return found;
}

}  // namespace bergman
