#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bess {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (bad profile, bad parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. Carries a 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Misuse of the model-building API (unknown ids, inverted bounds, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The solver could not produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace bess
