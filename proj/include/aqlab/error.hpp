#pragma once

#include <stdexcept>
#include <string>

namespace aqlab {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or malformed objects supplied by a caller.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Matrix entries that are not canonical elements of the requested field.
class FieldMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A computation could not reach a verdict at the current truncation bounds.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace aqlab
