#pragma once

#include <stdexcept>
#include <string>

namespace gravinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or singular geometry: bad grid, station on a cell vertex, etc.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input value outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, non-finite objective and similar breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gravinv
