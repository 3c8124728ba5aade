#pragma once

#include <stdexcept>
#include <string>

namespace nodeadapt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A forward-elimination pivot fell below the singularity threshold.
class SingularPivotError : public Error {
 public:
  using Error::Error;
};

/// State or adjoint marching produced NaN/Inf (training blew up).
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace nodeadapt
