// Exception hierarchy shared by every sramwb module.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sramwb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed netlist card. Carries the 1-based source line.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& detail, const std::string& source = {})
      : Error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " +
              detail),
        line_(line),
        detail_(detail) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Well-formed input that violates a netlist-level rule (duplicate ids, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Newton failure; node() names the node with the worst KCL residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::string node)
      : Error(what), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

// Singular MNA matrix, typically a subcircuit without a DC path to ground.
class FloatingCircuitError : public Error {
 public:
  using Error::Error;
};

class MeasurementError : public Error {
 public:
  using Error::Error;
};

}  // namespace sramwb
