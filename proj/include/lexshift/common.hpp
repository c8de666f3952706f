#pragma once

#include <stdexcept>
#include <string>

namespace lexshift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A smoothed probability reached 1, so its log-odds is unbounded.
class SaturationError : public Error {
 public:
  using Error::Error;
};

/// A request cannot be satisfied with the data available (e.g. too few donors).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexshift
