#pragma once

#include <stdexcept>
#include <string>

namespace pdmean {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Argument outside the mathematical domain of an operation (parameter
/// range, non-positive spectrum, mismatched dimensions).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// An internal numerical routine failed (eigensolver non-convergence,
/// loss of positive definiteness inside a solver).
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

/// File system failure.
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

/// Malformed serialized input. `field()` names the offending JSON path.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const char* kind() const noexcept override { return "parse"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace pdmean
