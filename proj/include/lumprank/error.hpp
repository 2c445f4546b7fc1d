#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lumprank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Vector or matrix sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dense operation requested on a problem larger than the configured cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace lumprank
