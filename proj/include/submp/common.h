#pragma once

#include <stdexcept>
#include <string>

namespace submp {

// Bad parameters or inputs outside the documented domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested work exceeds a hard enumeration / memory budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constraint system has no feasible point; carries a phase-1 witness value.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg, double witness_value = 0.0)
      : std::runtime_error(msg), witness(witness_value) {}
  double witness;
};

// Numerical breakdown (pivot collapse, non-converging iteration).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace submp
