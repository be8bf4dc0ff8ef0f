#pragma once

#include <stdexcept>
#include <string>

namespace parrondo {

/// A precondition of an operation was not met by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Boundary parameters for which no ergodicity guarantee is available.
class UnsupportedBoundary : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The stationary solver could not meet its residual target.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be stochastic has a row that does not sum to one.
class NonStochastic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PARRONDO_REQUIRE(cond, msg)                 \
  do {                                              \
    if (!(cond)) throw ::parrondo::ContractViolation(msg); \
  } while (false)

}  // namespace parrondo
