#pragma once

#include <stdexcept>
#include <string>

namespace mboa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance parameters that cannot describe a valid spin glass.
class InvalidInstanceError : public Error {
 public:
  using Error::Error;
};

/// Vector lengths that disagree with the problem size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a hard capacity limit (e.g. exhaustive enumeration).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Regression input that cannot determine a coefficient.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace mboa
