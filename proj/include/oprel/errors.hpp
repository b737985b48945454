#pragma once

#include <stdexcept>
#include <string>

namespace oprel {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (non-PD matrix,
// parameter at a degenerate endpoint, ...).
struct DomainError : Error {
  using Error::Error;
};

// Dimension or structural mismatch.
struct ShapeError : Error {
  using Error::Error;
};

// A numerical procedure broke down (recurrence breakdown, factorization
// failure, ...).
struct NumericalError : Error {
  using Error::Error;
};

// An iteration hit its cap before reaching tolerance.
struct ConvergenceError : NumericalError {
  ConvergenceError(const std::string& msg, double res)
      : NumericalError(msg), residual(res) {}
  double residual;
};

// Malformed text input; `line` is 1-based.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_no)
      : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
  int line;
};

}  // namespace oprel
