#pragma once

#include <stdexcept>
#include <string>

namespace isinglb {

/// Base for every error raised by the library. The CLI maps the concrete
/// subclasses onto exit codes (argument-like errors → 2, capacity → 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a vertex count (or sample width) do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis is violated (e.g. target error above 1/90).
class HypothesisError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Problem size exceeds a configured enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An exact search ran out of its node budget before finishing.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace isinglb
