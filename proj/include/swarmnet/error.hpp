#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmnet {

/// Bad user input: malformed files, invalid parameters, non-regular graphs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (singular system, non-finite values, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphValidationError : public InputError {
 public:
  GraphValidationError(std::size_t row, const std::string& what)
      : InputError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// State left the feasible simplex by more than the rounding tolerance.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(std::size_t step, const std::string& what)
      : NumericalError("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A stability certificate cannot be evaluated at the given point (division by zero).
class InapplicableCertificate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace swarmnet
