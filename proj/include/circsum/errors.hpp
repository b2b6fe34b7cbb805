#pragma once

#include <stdexcept>
#include <string>

namespace circsum {

/// Argument outside the mathematical domain (Im tau <= 0, |q| too close to 1, ab >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A truncated series or lattice enumeration could not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the requested parameters.
class HypothesisError : public std::invalid_argument {
 public:
  HypothesisError(std::string condition)
      : std::invalid_argument(condition), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// Exact-arithmetic failure: ring order mismatch, coefficient overflow, non-unit divisor.
class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact expansion contradicts the statement it was built to check.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace circsum
