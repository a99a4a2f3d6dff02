#include "qeslab/states.hpp"

#include <cmath>
#include <sstream>

#include "qeslab/errors.hpp"

namespace qeslab {

using cd = std::complex<double>;

WaveValue evaluate(const TravelingMode& mode, double x) {
  WaveValue w = gauge_wavefunction(mode.state, x);
  if (mode.direction == Direction::Right) {
    w.psi = std::conj(w.psi);
    w.dpsi = std::conj(w.dpsi);
  }
  return {mode.normalization * w.psi, mode.normalization * w.dpsi};
}

double flux(const WaveValue& w) { return 2.0 * (std::conj(w.psi) * w.dpsi).imag(); }

double flux(const TravelingMode& mode, double x) { return flux(evaluate(mode, x)); }

TravelingMode normalize_unit_flux(const TravelingMode& mode) {
  const WaveValue w0 = evaluate(mode, 0.0);
  const double j = flux(w0);
  if (!(std::abs(j) > 0.0) || !std::isfinite(j))
    throw DomainError("normalize_unit_flux: mode carries no flux");
  TravelingMode out = mode;
  out.normalization /= std::sqrt(std::abs(j));
  const WaveValue w = evaluate(out, 0.0);
  const double scale = std::abs(w.psi) + std::abs(w.dpsi);
  if (std::abs(w.psi) > 1e-14 * scale) {
    out.normalization *= std::conj(w.psi) / std::abs(w.psi);
  } else {
    // Right: psi'(0) on +i; Left is the mirror image.
    const cd target = mode.direction == Direction::Right ? cd(0.0, 1.0) : cd(0.0, -1.0);
    out.normalization *= target * std::conj(w.dpsi) / std::abs(w.dpsi);
  }
  return out;
}

std::string ParityState::label() const {
  std::ostringstream s;
  s << state.level_index << (parity == Parity::Even ? '+' : '-');
  return s.str();
}

WaveValue evaluate(const ParityState& p, double x) {
  const WaveValue w = gauge_wavefunction(p.state, x);
  if (p.parity == Parity::Even) return {p.normalization * w.psi.real(), p.normalization * w.dpsi.real()};
  return {-p.normalization * w.psi.imag(), -p.normalization * w.dpsi.imag()};
}

double flux(const ParityState& p, double x) { return flux(evaluate(p, x)); }

std::pair<ParityState, ParityState> parity_combine(const QesState& s) {
  // First nonzero coefficient, rotated back to the real axis by i^-k.
  double w = 0.0;
  const double big = s.coeffs.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < s.coeffs.size(); ++k) {
    if (std::abs(s.coeffs[k]) > 1e-12 * big) {
      cd r = s.coeffs[k];
      for (Eigen::Index q = 0; q < k; ++q) r *= cd(0.0, -1.0);
      w = r.real();
      break;
    }
  }
  if (w == 0.0) throw DomainError("parity_combine: state has no nonzero coefficient");
  return {ParityState{s, Parity::Even, 1.0 / w}, ParityState{s, Parity::Odd, 1.0 / w}};
}

std::pair<ParityState, ParityState> parity_combine_normalized(const QesState& s, double abs_tol) {
  auto [even, odd] = parity_combine(s);
  even.normalization /= std::sqrt(norm_squared(even, abs_tol).value);
  odd.normalization /= std::sqrt(norm_squared(odd, abs_tol).value);
  return {even, odd};
}

QuadratureResult<double> norm_squared(const ParityState& p, double abs_tol) {
  const Eigen::VectorXcd& c = p.state.coeffs;
  const int n = p.state.params.n;
  const double b = p.state.params.b;
  const double scale2 = p.normalization * p.normalization;
  const double coeff_sum = c.cwiseAbs().sum();
  // Below ~1e-14 relative the requested accuracy is out of reach in double precision.
  const double tol = std::max(abs_tol / std::max(scale2, 1e-300), 1e-14 * coeff_sum * coeff_sum);

  // phi(u) = P(u) + i Q(u) with real polynomials P, Q continued off the axis.
  auto pq = [&](cd u) {
    cd P = 0.0, Q = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
      P = P * u + c[k].real();
      Q = Q * u + c[k].imag();
    }
    return std::pair{P, Q};
  };
  auto weight = [n](cd u) { return std::pow(1.0 + u * u, -n); };

  // |psi|^2 dx = (1+u^2)^-n [ (P^2+Q^2)/2 +- Re( ((P^2-Q^2)/2 - i P Q) e^{i b u} ) ] du
  DecayHint hint;
  hint.kind = DecayHint::Kind::Algebraic;
  hint.rate = 2.0;
  hint.onset = 1.0;
  hint.scale = 0.5 * coeff_sum * coeff_sum;
  auto mean = quad_improper(
      [&](double u) {
        auto [P, Q] = pq(cd(u, 0.0));
        return 0.5 * (P.real() * P.real() + Q.real() * Q.real()) * weight(cd(u, 0.0)).real();
      },
      hint, 0.5 * tol);

  auto osc = quad_fourier(
      [&](cd u) {
        auto [P, Q] = pq(u);
        return weight(u) * (0.5 * (P * P - Q * Q) - cd(0.0, 1.0) * P * Q);
      },
      b, 2.0, 0.5 * tol);

  const double sign = p.parity == Parity::Even ? 1.0 : -1.0;
  QuadratureResult<double> out;
  out.value = scale2 * (mean.value + sign * osc.value.real());
  out.error_estimate = scale2 * (mean.error_estimate + osc.error_estimate);
  out.evaluations = mean.evaluations + osc.evaluations;
  return out;
}

std::vector<WronskianReport> self_adjoint_check(const std::vector<ParityState>& states, double X, double regime_tol) {
  if (!(X > 0.0)) throw DomainError("self_adjoint_check: X must be positive");
  std::vector<WronskianReport> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      WronskianReport r;
      r.pair = {states[i].label(), states[j].label()};
      r.X = X;
      r.w_plus = wronskian(states[i], states[j], X);
      r.w_minus = wronskian(states[i], states[j], -X);
      r.difference = r.w_plus - r.w_minus;
      const cd far_plus = wronskian(states[i], states[j], 2.0 * X);
      const cd far_minus = wronskian(states[i], states[j], -2.0 * X);
      const double drift = std::max(std::abs(far_plus - r.w_plus), std::abs(far_minus - r.w_minus));
      if (drift > regime_tol * (1.0 + std::abs(r.w_plus))) {
        std::ostringstream msg;
        msg << "self_adjoint_check: W[" << r.pair.first << ", " << r.pair.second << "] changes by " << drift
            << " between X=" << X << " and 2X; asymptotic regime not reached";
        throw RegimeError(msg.str());
      }
      out.push_back(r);
    }
  }
  return out;
}

} // namespace qeslab
