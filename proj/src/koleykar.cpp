#include "qeslab/koleykar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qeslab/errors.hpp"

namespace qeslab {

namespace {

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// Single Gauss-Kronrod 15 panel of cosh^nu; panels are 1/16 wide so the
// rule is exact to rounding for the smooth integrand.
double panel(double nu, double a, double b) {
  QuadOptions qo;
  qo.abs_tol = 1e-300;
  qo.rel_tol = 1e-15;
  return quad_adaptive([nu](double t) { return std::exp(nu * log_cosh(t)); }, a, b, qo).value;
}

} // namespace

void KKParams::validate() const {
  if (!(A1 > 0.0 && std::isfinite(A1) && nu > 0.0 && std::isfinite(nu))) {
    std::ostringstream msg;
    msg << "KKParams: need A1 > 0 and nu > 0 (got A1=" << A1 << ", nu=" << nu << ")";
    throw DomainError(msg.str());
  }
}

double kk_potential(const KKParams& p, double x) {
  return -p.A1 * std::exp(2.0 * p.nu * log_cosh(x)) - 0.5 * p.nu * (0.5 * p.nu + 1.0) * sech2(x);
}

double kk_energy(const KKParams& p) {
  p.validate();
  return -0.25 * p.nu * p.nu;
}

KKStates::KKStates(const KKParams& p) : p_(p) {
  p_.validate();
  // cosh^(2 nu) must stay finite for the potential and the phase rate.
  window_ = std::min(60.0, 600.0 / (2.0 * p_.nu));
  const auto panels = static_cast<std::size_t>(std::ceil(window_ / step_)) + 1;
  table_.assign(panels + 1, 0.0);
  for (std::size_t k = 1; k < table_.size(); ++k)
    table_[k] = table_[k - 1] + panel(p_.nu, (k - 1) * step_, k * step_);
  const double root = std::sqrt(p_.A1);
  safe_window_ = window_;
  for (std::size_t k = 0; k < table_.size(); ++k) {
    if (root * table_[k] > 1e6) {
      safe_window_ = std::max(0.0, (static_cast<double>(k) - 1.0) * step_);
      break;
    }
  }
}

void KKStates::check(double x) const {
  if (!(std::abs(x) <= window_)) {
    std::ostringstream msg;
    msg << "KKStates: |x| = " << std::abs(x) << " outside the evaluation window " << window_;
    throw DomainError(msg.str());
  }
}

double KKStates::phi(double x) const {
  check(x);
  const double ax = std::abs(x);
  const auto k = static_cast<std::size_t>(std::floor(ax / step_));
  const double base = k * step_;
  const double value = table_[k] + (ax > base ? panel(p_.nu, base, ax) : 0.0);
  return std::copysign(value, x);
}

double KKStates::phi_increment(double x, double d) const {
  check(x);
  check(x + d);
  if (d == 0.0) return 0.0;
  return d > 0.0 ? panel(p_.nu, x, x + d) : -panel(p_.nu, x + d, x);
}

WaveValue KKStates::eval(int which, double x) const {
  const double theta = std::sqrt(p_.A1) * phi(x);
  const double c = std::exp(-0.5 * p_.nu * log_cosh(x));
  const double dc = -0.5 * p_.nu * std::tanh(x) * c;
  const double dtheta = std::sqrt(p_.A1) * std::exp(p_.nu * log_cosh(x));
  const double cs = std::cos(theta), sn = std::sin(theta);
  if (which == 1) return {c * cs, dc * cs - c * dtheta * sn};
  if (which == 2) return {c * sn, dc * sn + c * dtheta * cs};
  throw DomainError("KKStates::eval: which must be 1 or 2");
}

double KKStates::second_derivative(int which, double x) const {
  const double nu = p_.nu;
  const double theta = std::sqrt(p_.A1) * phi(x);
  const double t = std::tanh(x);
  const double c = std::exp(-0.5 * nu * log_cosh(x));
  const double dc = -0.5 * nu * t * c;
  const double d2c = (0.25 * nu * nu * t * t - 0.5 * nu * sech2(x)) * c;
  const double dtheta = std::sqrt(p_.A1) * std::exp(nu * log_cosh(x));
  const double d2theta = nu * t * dtheta;
  const double cs = std::cos(theta), sn = std::sin(theta);
  if (which == 1) return d2c * cs - (2.0 * dc * dtheta + c * d2theta) * sn - c * dtheta * dtheta * cs;
  if (which == 2) return d2c * sn + (2.0 * dc * dtheta + c * d2theta) * cs - c * dtheta * dtheta * sn;
  throw DomainError("KKStates::second_derivative: which must be 1 or 2");
}

double KKStates::residual(int which, double E, double x) const {
  const double psi = eval(which, x).psi.real();
  const double r = -second_derivative(which, x) + (kk_potential(p_, x) - E) * psi;
  return std::abs(r) / (1.0 + std::abs(E * psi));
}

QuadratureResult<double> KKStates::norm_squared(int which, double abs_tol) const {
  if (which != 1 && which != 2) throw DomainError("KKStates::norm_squared: which must be 1 or 2");
  // cos^2 = (1 + cos 2 theta) / 2: the mean part decays like e^{-nu |x|}.
  DecayHint hint;
  hint.kind = DecayHint::Kind::Exponential;
  hint.rate = p_.nu;
  hint.scale = 0.5 * std::pow(2.0, p_.nu);
  hint.onset = 1.0;
  auto mean = quad_improper([&](double x) { return 0.5 * std::exp(-p_.nu * log_cosh(x)); }, hint, 0.5 * abs_tol);

  // Oscillating part on [0, X], X where cosh^(-2 nu) has fallen below the
  // tolerance; integrating by parts bounds the remainder by cosh^(-2 nu)(X) / sqrt(A1).
  const double root = std::sqrt(p_.A1);
  double X = 0.0;
  while (X < safe_window_ && std::exp(-2.0 * p_.nu * log_cosh(X)) / root > 0.05 * abs_tol) X += 0.25;
  X = std::min(X, safe_window_);
  QuadOptions qo;
  qo.abs_tol = 0.25 * abs_tol;
  qo.max_subdivisions = 200000;
  auto osc = quad_adaptive(
      [&](double x) { return std::exp(-p_.nu * log_cosh(x)) * std::cos(2.0 * root * phi(x)); }, 0.0, X, qo);
  const double tail = std::exp(-2.0 * p_.nu * log_cosh(X)) / root;

  const double sign = which == 1 ? 1.0 : -1.0;
  QuadratureResult<double> out;
  out.value = mean.value + sign * osc.value; // the even oscillating integrand: 2 * (1/2) * int_0^X
  out.error_estimate = mean.error_estimate + osc.error_estimate + 2.0 * tail;
  out.evaluations = mean.evaluations + osc.evaluations;
  return out;
}

KKWronskian kk_wronskian(const KKParams& p, double X, double tol) {
  const KKStates s(p);
  auto w = [&](double x) {
    const WaveValue a = s.eval(1, x), b = s.eval(2, x);
    return (a.dpsi * b.psi - a.psi * b.dpsi).real();
  };
  KKWronskian out;
  out.at_minus = w(-X);
  out.at_zero = w(0.0);
  out.at_plus = w(X);
  out.value = out.at_zero;
  const double spread = std::max({std::abs(out.at_minus - out.at_zero), std::abs(out.at_plus - out.at_zero)});
  if (spread > tol * (1.0 + std::abs(out.value))) {
    std::ostringstream msg;
    msg << "kk_wronskian: W varies by " << spread << " over [-" << X << ", " << X << "]";
    throw NumericalError(msg.str());
  }
  return out;
}

} // namespace qeslab
