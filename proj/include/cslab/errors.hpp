#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A coherent state (or evolved state) does not fit in the requested
/// truncation. `suggested_dim` is the smallest dimension that would pass.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t suggested_dim)
      : Error(what), suggested_dim_(suggested_dim) {}
  std::size_t suggested_dim() const noexcept { return suggested_dim_; }

 private:
  std::size_t suggested_dim_;
};

class RepresentationError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation that needs a hermitian operator gets one whose
/// hermitian flag is not set.
class FlagError : public Error {
 public:
  using Error::Error;
};

class FiducialError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMapError : public Error {
 public:
  using Error::Error;
};

/// Structured configuration error: names the offending field and the bound.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string bound)
      : Error("invalid value for '" + field + "': expected " + bound),
        field_(std::move(field)),
        bound_(std::move(bound)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& bound() const noexcept { return bound_; }

 private:
  std::string field_;
  std::string bound_;
};

}  // namespace cslab
