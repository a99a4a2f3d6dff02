#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qeslab/numerics/quadrature.hpp"
#include "qeslab/qes_core.hpp"

namespace qeslab {

enum class Direction { Right, Left };

/// Right = normalization * conj(exp(-g) phi), Left = normalization * exp(-g) phi.
/// With unit normalization the Left mode is the complex conjugate of the Right mode.
struct TravelingMode {
  QesState state;
  Direction direction = Direction::Right;
  std::complex<double> normalization{1.0, 0.0};
};

WaveValue evaluate(const TravelingMode& mode, double x);
inline WaveValue eval_mode(const TravelingMode& mode, double x) { return evaluate(mode, x); }

/// j = i (psi*' psi - psi* psi') = 2 Im(psi* psi').
double flux(const WaveValue& w);
double flux(const TravelingMode& mode, double x);

/// |j| = 1, and psi(0) real positive (or psi'(0) on the positive imaginary
/// axis for a Right mode when psi(0) = 0). Throws DomainError for zero flux.
TravelingMode normalize_unit_flux(const TravelingMode& mode);

enum class Parity { Even, Odd };

/// Even = normalization * Re(exp(-g) phi), Odd = -normalization * Im(exp(-g) phi).
struct ParityState {
  QesState state;
  Parity parity = Parity::Even;
  double normalization = 1.0;

  [[nodiscard]] std::string label() const; ///< e.g. "2-"
};

WaveValue evaluate(const ParityState& p, double x);
double flux(const ParityState& p, double x);

/// Scaled so that phi = P + iQ has P(0) = 1: for n = 1, 2 these are the
/// cos/sin closed forms with the (1 -+ sqrt 2) factors.
std::pair<ParityState, ParityState> parity_combine(const QesState& s);

/// Same pair scaled to unit L2 norm.
std::pair<ParityState, ParityState> parity_combine_normalized(const QesState& s, double abs_tol = 1e-11);

/// int |psi|^2 dx, computed in u = sinh x as a non-oscillatory mean part
/// plus a Fourier part whose tails are moved into the upper half plane.
QuadratureResult<double> norm_squared(const ParityState& p, double abs_tol = 1e-11);

/// W[a, b] = a' b - a b'.
inline std::complex<double> wronskian(const WaveValue& a, const WaveValue& b) { return a.dpsi * b.psi - a.psi * b.dpsi; }

template <typename A, typename B>
std::complex<double> wronskian(const A& a, const B& b, double x) {
  return wronskian(evaluate(a, x), evaluate(b, x));
}

struct WronskianReport {
  std::pair<std::string, std::string> pair;
  std::complex<double> w_plus;
  std::complex<double> w_minus;
  double X = 0.0;
  std::complex<double> difference;
};

// Cross-level Wronskians approach their limit like 1/sinh X, so X = 20 leaves ~1e-8.
inline constexpr double kAsymptoticX = 20.0;

/// Every pair (i < j) at +-X. Throws RegimeError when the values at X and 2X
/// disagree by more than regime_tol, i.e. the asymptotic limit is not reached.
std::vector<WronskianReport> self_adjoint_check(const std::vector<ParityState>& states, double X = kAsymptoticX,
                                                double regime_tol = 1e-6);

} // namespace qeslab
