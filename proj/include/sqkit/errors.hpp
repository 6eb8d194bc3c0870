#pragma once

#include <stdexcept>
#include <string>

namespace sqkit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Input is structurally valid but has no analyzable content (e.g. silence).
class DegenerateInputError : public ParamError {
 public:
  using ParamError::ParamError;
};

/// File content is malformed for the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File format recognized but the codec/layout is not supported.
class UnsupportedError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Filesystem-level read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Optimization diverged.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Model and dataset artifacts do not belong together.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqkit
