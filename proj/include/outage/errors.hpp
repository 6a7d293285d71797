#pragma once

#include <stdexcept>
#include <string>

namespace outage {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root bracket without a sign change.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative method ran out of iterations before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Distribution lacks a property an operation relies on (monotone density,
// G(0) = 0, identical marginals, ...).
class UnsupportedDistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quantity is infinite for the given inputs.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace outage
