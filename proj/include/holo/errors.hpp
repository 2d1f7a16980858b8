#pragma once

#include <stdexcept>
#include <string>

namespace holo {

/// Bad input: malformed matrices, dimension mismatches, out-of-range parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation left its regime of validity (non-finite integrand, lost
/// positivity, truncation tail above tolerance, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace holo
