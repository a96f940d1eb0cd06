#pragma once

#include <stdexcept>
#include <string>

namespace roughmf {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid input (e.g. a degenerate partition).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or quadrature routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (CLI, simulation settings).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace roughmf
