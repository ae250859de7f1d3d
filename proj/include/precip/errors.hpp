#pragma once

#include <stdexcept>
#include <string>

namespace precip {

// Invalid distribution parameters or arguments outside a function's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or insufficient input data (bad dates, empty series, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An estimator could not produce a valid parameter set for the sample.
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent run configuration (simulation configs, CLI flag combinations).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root bracketing or iteration failure that valid input must never trigger.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace precip
