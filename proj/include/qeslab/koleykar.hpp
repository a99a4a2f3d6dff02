#pragma once

#include <complex>
#include <vector>

#include "qeslab/numerics/quadrature.hpp"
#include "qeslab/qes_core.hpp"

namespace qeslab {

struct KKParams {
  double A1 = 0.25;
  double nu = 1.0;

  void validate() const; ///< A1 > 0, nu > 0
};

/// -A1 cosh^(2 nu) x - (nu/2)(nu/2 + 1) sech^2 x.
double kk_potential(const KKParams& p, double x);

/// -nu^2 / 4.
double kk_energy(const KKParams& p);

/// psi1 = cosh^(-nu/2) cos(sqrt(A1) Phi), psi2 = ... sin, Phi(x) = int_0^x cosh^nu.
/// Phi is tabulated once on panels of width 1/16 (Gauss-Kronrod 15 each).
class KKStates {
public:
  explicit KKStates(const KKParams& p);

  [[nodiscard]] const KKParams& params() const { return p_; }
  /// |x| beyond which cosh^nu would overflow; evaluation outside throws DomainError.
  [[nodiscard]] double window() const { return window_; }
  /// |x| up to which sqrt(A1) Phi stays below 1e6 rad, i.e. the phase keeps ~1e-10 absolute accuracy.
  [[nodiscard]] double safe_window() const { return safe_window_; }

  [[nodiscard]] double phi(double x) const;
  /// Phi(x + d) - Phi(x) without cancellation.
  [[nodiscard]] double phi_increment(double x, double d) const;

  /// which = 1 (cos) or 2 (sin).
  [[nodiscard]] WaveValue eval(int which, double x) const;
  [[nodiscard]] double second_derivative(int which, double x) const;

  /// |-psi'' + V psi - E psi| / (1 + |E psi|), psi'' analytic.
  [[nodiscard]] double residual(int which, double E, double x) const;

  [[nodiscard]] QuadratureResult<double> norm_squared(int which, double abs_tol = 1e-8) const;

private:
  void check(double x) const;

  KKParams p_;
  double window_ = 0.0;
  double safe_window_ = 0.0;
  double step_ = 1.0 / 16;
  std::vector<double> table_; ///< Phi at k * step_, k >= 0
};

/// W[psi1, psi2] at -X, 0, +X (in that order).
struct KKWronskian {
  double value = 0.0; ///< the common constant
  double at_minus = 0.0;
  double at_zero = 0.0;
  double at_plus = 0.0;
};

/// Throws NumericalError when the three samples differ by more than tol.
KKWronskian kk_wronskian(const KKParams& p, double X = 10.0, double tol = 1e-8);

} // namespace qeslab
