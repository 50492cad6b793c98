#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamreal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A symbol that the chart does not declare.
class UndeclaredSymbol : public Error {
 public:
  explicit UndeclaredSymbol(std::string symbol)
      : Error("undeclared symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}
  /// Same error with a location prefix such as "line 7".
  UndeclaredSymbol(std::string symbol, const std::string& where)
      : Error(where + ": undeclared symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

/// Evaluation at a point that does not bind a symbol of the expression.
class MissingSymbol : public Error {
 public:
  explicit MissingSymbol(std::string symbol)
      : Error("point has no value for symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

/// Division by zero, logarithm of a non-positive number, and similar.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands living on different coordinate frames, or of incompatible degree.
class ChartMismatch : public Error {
 public:
  using Error::Error;
};

/// Structural precondition failure (degenerate form, singular Jacobian, ...).
class DegenerateStructure : public Error {
 public:
  using Error::Error;
};

/// Line integration hit a singularity or failed to converge.
class PathSingularity : public Error {
 public:
  using Error::Error;
};

/// Step failure inside the ODE integrator.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& message, double time, std::vector<double> state)
      : Error(message + " at t=" + std::to_string(time)), time_(time), state_(std::move(state)) {}
  double time() const noexcept { return time_; }
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  double time_;
  std::vector<double> state_;
};

/// Model-file or registry problem. `line` is 1-based, 0 when not applicable.
class ModelError : public Error {
 public:
  ModelError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hamreal
