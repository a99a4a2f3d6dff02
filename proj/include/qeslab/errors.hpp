#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qeslab {

/// Base class for every failure raised by a numerical kernel.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class BudgetExceeded : public NumericalError {
public:
  BudgetExceeded(const std::string& what, std::complex<double> best, double error)
      : NumericalError(what), best_estimate(best), error_estimate(error) {}

  std::complex<double> best_estimate;
  double error_estimate;
};

/// The sampled integrand exceeded the decay envelope declared by the caller.
class EnvelopeViolation : public NumericalError {
public:
  EnvelopeViolation(const std::string& what, double x, double value, double bound)
      : NumericalError(what), x(x), value(value), bound(bound) {}

  double x;
  double value;
  double bound;
};

/// Root finder called without a sign change, or f produced NaN.
class BracketError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Step size collapsed during ODE integration.
class StiffnessError : public NumericalError {
public:
  StiffnessError(const std::string& what, double t, std::vector<std::complex<double>> state)
      : NumericalError(what), last_t(t), last_state(std::move(state)) {}

  double last_t;
  std::vector<std::complex<double>> last_state;
};

/// An iterative eigen/root iteration did not converge within its budget.
class IterationBudgetError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Asymptotic or matching regime not reached (WKB validity, Wronskian limits).
class RegimeError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A matrix that should carry the QES band/reality pattern does not.
class StructuralError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Eigenvalues with an imaginary part above the snapping threshold.
class RealityViolation : public NumericalError {
public:
  RealityViolation(const std::string& what, std::vector<std::complex<double>> raw)
      : NumericalError(what), raw_eigenvalues(std::move(raw)) {}

  std::vector<std::complex<double>> raw_eigenvalues;
};

} // namespace qeslab
