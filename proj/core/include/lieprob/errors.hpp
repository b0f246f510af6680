#pragma once

#include <stdexcept>
#include <string>

namespace lieprob {

/// Bad user input: wrong dimensions, non-positive parameters, empty sets.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point or parameter falls outside the region where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear equality/inequality constraints admit no common point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivative data contradict the implicit-prior envelope.
class InconsistentDataError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

/// Floating point breakdown: non-PSD covariance, overflow, divergent series.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transformed gradient or chart Jacobian vanishes at an evaluation point.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double where)
      : NumericalError(what), where_(where) {}
  [[nodiscard]] double where() const noexcept { return where_; }

 private:
  double where_;
};

/// The candidate generator is not admitted by the ODE.
class NotASymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Design points incompatible with the knot layout.
class DesignError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class NotImplementedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Internal invariant broken; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lieprob
