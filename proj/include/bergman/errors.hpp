#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (domain spec, rational, point list, term list).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Multi-index / point length does not match the domain dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (p <= 1 for a
/// conjugate, theta outside (0,1), negative radius, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A function or cross term is not integrable where integrability is required.
class NotIntegrable : public Error {
 public:
  using Error::Error;
};

/// The scan window cannot realize the extremal multi-index.
class WindowTooSmall : public Error {
 public:
  WindowTooSmall(const std::string& what, int required)
      : Error(what), required_(required) {}
  int required_window() const { return required_; }

 private:
  int required_;
};

class PointOutsideDomain : public Error {
 public:
  using Error::Error;
};

class UnsupportedDomain : public Error {
 public:
  using Error::Error;
};

/// Gram matrix singular or condition estimate above the admissible bound.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// Numerical verdict neither converged nor showed a divergence signature.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

/// Internal consistency failure of the index chain. Never a valid state.
class ChainViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace bergman
