#pragma once

#include <stdexcept>
#include <string>

namespace scorecard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or configuration value was violated before any work began.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input data could not be parsed or is inconsistent with its schema.
class DataError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure diverged or failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace scorecard
