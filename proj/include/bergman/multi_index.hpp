#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace bergman {

/// A point of Z^n: the exponent of the Laurent monomial z^alpha.
/// Ordering is lexicographic, which fixes every witness selection.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n, int fill = 0) : c_(n, fill) {}
  MultiIndex(std::initializer_list<int> c) : c_(c) {}
  explicit MultiIndex(std::vector<int> c) : c_(std::move(c)) {}

  std::size_t size() const { return c_.size(); }
  int operator[](std::size_t i) const { return c_[i]; }
  int& operator[](std::size_t i) { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  const std::vector<int>& components() const { return c_; }

  bool is_zero() const;
  bool nonnegative() const;
  int max_abs() const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.c_ <=> b.c_; }

  /// "(a,b,c)"
  std::string str() const;

 private:
  std::vector<int> c_;
};

/// Visits every point of the box {|alpha_i| <= radius} in lexicographic order.
template <typename F>
void for_each_in_box(std::size_t dim, int radius, F&& visit) {
  MultiIndex a(dim, -radius);
  if (dim == 0) {
    visit(a);
    return;
  }
  while (true) {
    visit(a);
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (a[i] < radius) {
        ++a[i];
        break;
      }
      a[i] = -radius;
      if (i == 0) return;
    }
  }
}

}  // namespace bergman
