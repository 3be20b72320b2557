#pragma once

#include <stdexcept>
#include <string>

namespace wshr {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, band counts or index ranges that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// File access or file-format problems.
class IoError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf or otherwise unusable numeric input.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or requests that cannot be satisfied.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace wshr
