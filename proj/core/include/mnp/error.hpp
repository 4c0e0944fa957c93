#pragma once

#include <stdexcept>
#include <string>

namespace mnp {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Floating point trouble detected at run time (monotonicity loss, stalls,
/// degenerate directions).
class NumericalFault : public Error {
 public:
  using Error::Error;
};

/// An enumeration oracle was asked to handle an instance above its size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed instance text. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mnp
