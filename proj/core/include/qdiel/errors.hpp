#pragma once

#include <stdexcept>
#include <string>

namespace qdiel {

// Argument outside the mathematical domain of an operation (omega <= 0,
// pole outside the interval, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A parameter set violates a type invariant. `field()` names the offending
// field so front ends can report it.
class InvariantError : public std::invalid_argument {
public:
  InvariantError(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double best_estimate_;
  double error_estimate_;
};

// Quantity is infinite for the given parameters (lossless k-integral,
// infrared-divergent thermal integral).
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the regime a closed form covers (overdamped oscillator).
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Integration band does not contain the features an energy integral needs.
class TruncationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdiel
