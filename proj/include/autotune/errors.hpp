#pragma once

#include <stdexcept>
#include <string>

namespace autotune {

// Bad input: malformed data, invalid configuration, shape mismatch.
// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A fit or computation that could not produce a usable result.
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace autotune
