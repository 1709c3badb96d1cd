#include "bergman/mixed_monomial.hpp"

#include <algorithm>
#include <cstdlib>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

std::complex<double> ipow(std::complex<double> z, int k) {
  if (k == 0) return 1.0;
  if (k < 0) return 1.0 / ipow(z, -k);
  std::complex<double> r = 1.0;
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

}  // namespace

MixedMonomialSum MixedMonomialSum::monomial(const MultiIndex& alpha, ComplexRational c) {
  return mixed(alpha, MultiIndex(alpha.size()), std::move(c));
}

MixedMonomialSum MixedMonomialSum::mixed(const MultiIndex& alpha, const MultiIndex& gamma, ComplexRational c) {
  MixedMonomialSum s(alpha.size());
  s.add(c, alpha, gamma);
  return s;
}

void MixedMonomialSum::add(const ComplexRational& c, const MultiIndex& alpha, const MultiIndex& gamma) {
  if (alpha.size() != dim_ || gamma.size() != dim_) throw DimensionError("term dimension mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({alpha, gamma}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MixedMonomialSum::add(const MixedMonomialSum& other, const ComplexRational& scale) {
  for (const auto& [key, c] : other.terms_) add(c * scale, key.first, key.second);
}

std::vector<MixedTerm> MixedMonomialSum::term_list() const {
  std::vector<MixedTerm> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back({c, key.first, key.second});
  return out;
}

bool MixedMonomialSum::antiholomorphic_free() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.second.is_zero(); });
}

int MixedMonomialSum::angular_bandwidth() const {
  int b = 0;
  for (const auto& [key, c] : terms_)
    for (std::size_t i = 0; i < dim_; ++i) b = std::max(b, std::abs(key.first[i] - key.second[i]));
  return b;
}

std::complex<double> MixedMonomialSum::evaluate(std::span<const std::complex<double>> z) const {
  if (z.size() != dim_) throw DimensionError("point dimension mismatch");
  std::complex<double> s = 0.0;
  for (const auto& [key, c] : terms_) {
    std::complex<double> t = c.to_complex();
    for (std::size_t i = 0; i < dim_; ++i) t *= ipow(z[i], key.first[i]) * ipow(std::conj(z[i]), key.second[i]);
    s += t;
  }
  return s;
}

LaurentPoly LaurentPoly::from(const Domain& d, MixedMonomialSum sum) {
  if (sum.dim() != static_cast<std::size_t>(d.dim())) throw DimensionError("polynomial dimension mismatch");
  for (const auto& [key, c] : sum.terms()) {
    if (!key.second.is_zero()) throw DomainError("Laurent polynomial term carries conjugate factors");
    if (!holomorphy_ok(d, key.first))
      throw DomainError("z^" + key.first.str() + " is not holomorphic on " + d.spec());
  }
  return LaurentPoly(std::move(sum));
}

LaurentPoly LaurentPoly::monomial(const Domain& d, const MultiIndex& alpha, ComplexRational c) {
  return from(d, MixedMonomialSum::monomial(alpha, std::move(c)));
}

}  // namespace bergman
