#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vssdd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments (empty variable lists, degenerate generator parameters).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Vtree node id outside [0, 2M-1].
class InvalidId : public Error {
 public:
  using Error::Error;
};

/// A term containing both X and not X.
class InvalidTerm : public Error {
 public:
  using Error::Error;
};

/// Counting universe that misses a variable the function depends on.
class InvalidUniverse : public Error {
 public:
  using Error::Error;
};

/// Brute-force limits exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's precondition (offset mismatch, wrong mode,
/// handles from a different manager).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Internal invariant failure; indicates a bug rather than bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Text input error; carries the 1-based line number (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vssdd
