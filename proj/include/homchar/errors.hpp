#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homchar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL input. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        message_(what),
        line_(line),
        column_(column) {}

  /// The diagnostic without the location suffix.
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// Input parses but is not an admissible equation, profile or candidate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands live over different symbol or unknown universes.
class UniverseMismatch : public Error {
 public:
  using Error::Error;
};

/// A hard computational cap (N <= 8 enumeration, n <= 4 polarization,
/// rational-function degree) was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class CannotEliminate : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside a function's domain, e.g. a(0) = d(0)/0.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace homchar
