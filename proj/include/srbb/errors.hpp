#pragma once

#include <stdexcept>
#include <string>

namespace srbb {

/// Bad input: wrong sizes, out-of-range indices, unnormalized vectors.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A loss or intermediate value became NaN/Inf.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An optimizer or solver finished above its accepted error.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srbb
