#include "qeslab/qes_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qeslab/errors.hpp"
#include "qeslab/numerics/eigen.hpp"

namespace qeslab {

using cd = std::complex<double>;

namespace {

constexpr cd kI{0.0, 1.0};

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

cd i_power(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

} // namespace

cd GaugeFactor::value(double x) const {
  return cd((params.n - 0.5) * log_cosh(x), 0.5 * params.b * std::sinh(x));
}

cd GaugeFactor::derivative(double x) const {
  return cd((params.n - 0.5) * std::tanh(x), 0.5 * params.b * std::cosh(x));
}

QesMatrix build_hg_matrix(const ModelParams& p) {
  p.validate();
  const int n = p.n;
  const double b = p.b;
  QesMatrix m{p, Eigen::MatrixXcd::Zero(n, n)};
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    if (k + 1 < n) m.entries(k + 1, k) = kI * (b * (kk - n + 1));
    m.entries(k, k) = -kk * (kk - 1) + 2.0 * (n - 1) * kk + 0.25 * b * b - (n - 0.5) * (n - 0.5);
    if (k >= 1) m.entries(k - 1, k) = kI * (b * kk);
    if (k >= 2) m.entries(k - 2, k) = -kk * (kk - 1);
  }
  return m;
}

Eigen::MatrixXd sl2_generator(Sl2 which, int n) {
  if (n < 1) throw DomainError("sl2_generator: n must be >= 1");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    switch (which) {
    case Sl2::Minus:
      if (k >= 1) j(k - 1, k) = k;
      break;
    case Sl2::Zero:
      j(k, k) = k - 0.5 * (n - 1);
      break;
    case Sl2::Plus:
      if (k + 1 < n) j(k + 1, k) = k - (n - 1);
      break;
    }
  }
  return j;
}

QesMatrix build_sl2_matrix(const ModelParams& p) {
  p.validate();
  const int n = p.n;
  const Eigen::MatrixXcd jp = sl2_generator(Sl2::Plus, n).cast<cd>();
  const Eigen::MatrixXcd j0 = sl2_generator(Sl2::Zero, n).cast<cd>();
  const Eigen::MatrixXcd jm = sl2_generator(Sl2::Minus, n).cast<cd>();
  const cd ib = kI * p.b;
  const double constant = 0.25 * p.b * p.b - 0.5 * (n * static_cast<double>(n) - 0.5);
  Eigen::MatrixXcd h = -jp * jm - jm * jm + ib * jp + ib * jm + static_cast<double>(n - 1) * j0;
  h.diagonal().array() += constant;
  return {p, h};
}

Eigen::MatrixXd to_real_similar(const QesMatrix& m) {
  const Eigen::Index n = m.entries.rows();
  if (m.entries.cols() != n) throw StructuralError("to_real_similar: matrix is not square");
  const double tol = 1e-13 * std::max(1.0, max_row_sum_norm(m.entries));
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const cd v = m.entries(r, k);
      const bool in_band = r >= k - 2 && r <= k + 1;
      // i^(k-r) M(r,k) must be real: real entries at even offsets, imaginary at odd.
      const bool even_offset = (k - r) % 2 == 0;
      const bool pattern_ok = in_band ? (even_offset ? std::abs(v.imag()) <= tol : std::abs(v.real()) <= tol)
                                      : std::abs(v) <= tol;
      if (!pattern_ok) {
        std::ostringstream msg;
        msg << "to_real_similar: entry (" << r << ", " << k << ") = " << v << " breaks the QES pattern";
        throw StructuralError(msg.str());
      }
      if (in_band) t(r, k) = (i_power(static_cast<int>(k - r)) * v).real();
    }
  }
  return t;
}

std::vector<QesState> qes_spectrum(const ModelParams& p) {
  const QesMatrix m = build_hg_matrix(p);
  const EigenSystem es = eigensystem_small(to_real_similar(m));
  const int n = p.n;

  std::vector<cd> raw(es.eigenvalues.data(), es.eigenvalues.data() + n);
  for (const cd& e : raw) {
    if (e.imag() != 0.0) {
      std::ostringstream msg;
      msg << "qes_spectrum: complex eigenvalue " << e << " for b=" << p.b << ", n=" << n;
      throw RealityViolation(msg.str(), raw);
    }
  }

  std::vector<QesState> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    QesState s;
    s.params = p;
    s.energy = es.eigenvalues[j].real();
    s.coeffs.resize(n);
    // The phase-normalized eigenvector of the real matrix T is real.
    for (int k = 0; k < n; ++k) s.coeffs[k] = i_power(k) * es.eigenvectors(k, j).real();
    s.coeffs.normalize();
    out.push_back(std::move(s));
  }

  auto lex_less = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& c) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      if (a[k].real() != c[k].real()) return a[k].real() < c[k].real();
      if (a[k].imag() != c[k].imag()) return a[k].imag() < c[k].imag();
    }
    return false;
  };
  std::stable_sort(out.begin(), out.end(), [&](const QesState& a, const QesState& c) {
    if (a.energy != c.energy) return a.energy < c.energy;
    return lex_less(a.coeffs, c.coeffs);
  });
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)].level_index = j + 1;
  return out;
}

WaveValue gauge_envelope(const QesState& s, double x) {
  const int n = static_cast<int>(s.coeffs.size());
  const double half = s.params.n - 0.5;
  const double t = std::tanh(x);
  const double ax = std::abs(x);
  const double e = std::exp(-2.0 * ax);
  const double sech = 2.0 * std::exp(-ax) / (1.0 + e);
  // cosh^-(n-1/2) z^k = t^k sech^(n-1/2-k)
  cd value = 0.0, dphi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double tk = std::pow(t, k);
    value += s.coeffs[k] * tk * std::pow(sech, half - k);
    // cosh^-(n-1/2) cosh z^(k-1) k = k t^(k-1) sech^(n-3/2-k+1)
    if (k >= 1) dphi += s.coeffs[k] * static_cast<double>(k) * std::pow(t, k - 1) * std::pow(sech, half - k);
  }
  return {value, dphi - half * t * value};
}

WaveValue gauge_wavefunction(const QesState& s, double x) {
  const WaveValue a = gauge_envelope(s, x);
  const double theta = 0.5 * s.params.b * std::sinh(x);
  const cd phase = std::polar(1.0, -theta);
  const cd ik = kI * (0.5 * s.params.b * std::cosh(x));
  return {phase * a.psi, phase * (a.dpsi - ik * a.psi)};
}

double verify_schrodinger_residual(const QesState& s, const std::vector<double>& x_grid) {
  // 8th-order central weights for f'' over offsets 0..4 (times 1/h^2).
  static constexpr std::array<double, 5> w = {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  const double b = s.params.b;
  double worst = 0.0;
  for (double x : x_grid) {
    const double v = eval_potential(s.params, x);
    const double k_local = std::sqrt(std::abs(s.energy - v) + 1.0);
    const double h = 0.05 / k_local;
    // f(d) = psi(x + d) e^{+i theta(x)}: the phase difference is formed
    // without subtracting two large angles.
    auto f = [&](double d) {
      const WaveValue a = gauge_envelope(s, x + d);
      const double dtheta = b * std::cosh(x + 0.5 * d) * std::sinh(0.5 * d);
      return std::polar(1.0, -dtheta) * a.psi;
    };
    const cd f0 = f(0.0);
    cd second = w[0] * f0;
    for (int j = 1; j <= 4; ++j) second += w[static_cast<std::size_t>(j)] * (f(j * h) + f(-j * h));
    second /= h * h;
    const cd residual = -second + (v - s.energy) * f0;
    worst = std::max(worst, std::abs(residual) / (1.0 + std::abs(s.energy * f0)));
  }
  return worst;
}

} // namespace qeslab
