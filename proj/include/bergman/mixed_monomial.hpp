#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bergman/domains.hpp"

namespace bergman {

struct MixedTerm {
  ComplexRational coeff;
  MultiIndex alpha;
  MultiIndex gamma;
};

/// f(z) = sum c * z^alpha * conj(z)^gamma with exact coefficients.
/// Identical (alpha, gamma) pairs are merged and zero coefficients dropped.
class MixedMonomialSum {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;

  MixedMonomialSum() = default;
  explicit MixedMonomialSum(std::size_t dim) : dim_(dim) {}

  static MixedMonomialSum monomial(const MultiIndex& alpha, ComplexRational c = Rational(1));
  static MixedMonomialSum mixed(const MultiIndex& alpha, const MultiIndex& gamma, ComplexRational c = Rational(1));

  void add(const ComplexRational& c, const MultiIndex& alpha, const MultiIndex& gamma);
  void add(const MixedMonomialSum& other, const ComplexRational& scale = Rational(1));

  std::size_t dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Key, ComplexRational>& terms() const { return terms_; }
  std::vector<MixedTerm> term_list() const;

  /// All gamma are zero.
  bool antiholomorphic_free() const;
  /// Largest |alpha_i - gamma_i|: the trigonometric degree in each angle.
  int angular_bandwidth() const;

  std::complex<double> evaluate(std::span<const std::complex<double>> z) const;

  friend bool operator==(const MixedMonomialSum& a, const MixedMonomialSum& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t dim_ = 0;
  std::map<Key, ComplexRational> terms_;
};

/// A mixed monomial sum with no conjugate factors whose exponents are all
/// holomorphic on the domain: a finite section of the monomial basis.
class LaurentPoly {
 public:
  /// Throws DomainError when a term carries conj(z) factors or is not
  /// holomorphic on d.
  static LaurentPoly from(const Domain& d, MixedMonomialSum sum);
  static LaurentPoly monomial(const Domain& d, const MultiIndex& alpha, ComplexRational c = Rational(1));

  const MixedMonomialSum& sum() const { return sum_; }
  operator const MixedMonomialSum&() const { return sum_; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.sum_ == b.sum_; }

 private:
  explicit LaurentPoly(MixedMonomialSum s) : sum_(std::move(s)) {}
  MixedMonomialSum sum_;
};

}  // namespace bergman
