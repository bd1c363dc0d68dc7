#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or sign violations in the data handed to an operation.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Parameters that make a request meaningless (resolution guard, bad edges, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMethodError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t step, double time)
      : NumericalError(what), step_(step), time_(time) {}
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

// The Madelung solver only runs on nodeless states.
class NodelessViolation : public NumericalError {
 public:
  NodelessViolation(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavelab
