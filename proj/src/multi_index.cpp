#include "bergman/multi_index.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace bergman {

bool MultiIndex::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int v) { return v == 0; });
}

bool MultiIndex::nonnegative() const {
  return std::all_of(c_.begin(), c_.end(), [](int v) { return v >= 0; });
}

int MultiIndex::max_abs() const {
  int m = 0;
  for (int v : c_) m = std::max(m, std::abs(v));
  return m;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

}  // namespace bergman
