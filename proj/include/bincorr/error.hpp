#pragma once

#include <stdexcept>
#include <string>

namespace bincorr {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model parameters or a model document failed validation.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// Operand shapes do not agree (matrix/vector sizes, realization length).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An exact computation would enumerate more outcomes than the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// The operation is not defined for the given model kind.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bincorr
