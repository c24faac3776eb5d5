#pragma once

#include <stdexcept>
#include <string>

namespace sgaudit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed caller input: bad dimensions, non-finite entries, out-of-range
// arguments, mismatched bound/operator combinations.
struct InputError : Error {
  using Error::Error;
};

// A numerical routine could not meet its own accuracy contract.
struct ComputationError : Error {
  using Error::Error;
};

// Linear solve hit a (numerically) singular matrix.  Carries the condition
// estimate that triggered the rejection.
struct SingularityError : ComputationError {
  SingularityError(const std::string& msg, double cond)
      : ComputationError(msg), condition_estimate(cond) {}
  double condition_estimate;
};

// A Chernoff family produced a value violating F(0) = 1 or the contraction
// requirement.
struct FamilyContractError : Error {
  using Error::Error;
};

// Operator generation failed its certificate check.
struct GenerationError : Error {
  using Error::Error;
};

// Rate fitting had too few usable points.
struct FitError : Error {
  using Error::Error;
};

// Bad config file: unknown keys, missing fields, wrong types.
struct ConfigError : Error {
  using Error::Error;
};

// File read/write failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace sgaudit
