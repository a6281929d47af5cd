#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmot {

/// Input violates a mathematical precondition (bad weight, k > n, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix or tensor dimensions do not line up.
class ShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed text input. `line()` is 1-based; 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gmot
