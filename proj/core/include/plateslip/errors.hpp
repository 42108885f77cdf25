#pragma once

#include <stdexcept>
#include <string>

namespace plateslip {

/// Argument outside the mathematical domain of a function (negative slip, α ∉ [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inadmissible run or model configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-posed discrete operator (singular mass matrix, empty Dirichlet set, ...).
class DiscretizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An irreversible variable violates its invariant (negative or decreasing history slip).
class StateCorruption : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plateslip
