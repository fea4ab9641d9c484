#pragma once

#include <stdexcept>
#include <string>

namespace klab {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested a modular inverse of a non-unit.
struct NotInvertible : Error {
  using Error::Error;
};

// Argument violates an operation's precondition (non-unit a, 2L >= K, ...).
struct BadParameters : Error {
  using Error::Error;
};

// The requested computation exceeds the operation's enumeration budget.
// Counters refuse to truncate silently; callers must shrink the input.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Two solutions that the structure theory says must agree do not.
struct WitnessViolation : Error {
  using Error::Error;
};

// Malformed experiment configuration (CLI maps this to exit status 2).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace klab
