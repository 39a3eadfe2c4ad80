#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace densek {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or empty edge-list input. `line()` is 1-based, 0 when the
/// error is not tied to a specific line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A precondition on sizes, ranges or configuration was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The iteration produced a non-finite value.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace densek
