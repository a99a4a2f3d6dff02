#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qeslab/potential.hpp"

namespace qeslab {

/// g(x) = i b sinh(x)/2 + (n - 1/2) ln cosh x, with psi = exp(-g) phi(sinh x).
struct GaugeFactor {
  ModelParams params;

  [[nodiscard]] std::complex<double> value(double x) const;
  [[nodiscard]] std::complex<double> derivative(double x) const;
};

/// Matrix of H_g on the monomials {1, z, ..., z^(n-1)}: column k holds H_g z^k.
struct QesMatrix {
  ModelParams params;
  Eigen::MatrixXcd entries;
};

QesMatrix build_hg_matrix(const ModelParams& p);

enum class Sl2 { Plus, Zero, Minus };

/// J+ = z^2 d/dz - (n-1) z,  J0 = z d/dz - (n-1)/2,  J- = d/dz  on the monomial basis.
Eigen::MatrixXd sl2_generator(Sl2 which, int n);

/// -J+J- - J-J- + ib J+ + ib J- + (n-1) J0 + b^2/4 - (n^2 - 1/2)/2.
QesMatrix build_sl2_matrix(const ModelParams& p);

/// T = S^-1 M S with S = diag(i^k). Throws StructuralError if M lacks the
/// band pattern (rows k-2..k+1) or i^(k-r) M(r,k) is not real.
Eigen::MatrixXd to_real_similar(const QesMatrix& m);

struct QesState {
  ModelParams params;
  double energy = 0.0;
  Eigen::VectorXcd coeffs; ///< phi(z) = sum coeffs[k] z^k, unit 2-norm
  int level_index = 1;     ///< 1-based rank by ascending energy
};

/// All n algebraic levels, ascending. Throws RealityViolation on complex energies.
std::vector<QesState> qes_spectrum(const ModelParams& p);

struct WaveValue {
  std::complex<double> psi;
  std::complex<double> dpsi;
};

/// (cosh x)^-(n-1/2) phi(sinh x) and its x-derivative, evaluated as a
/// homogeneous polynomial in (tanh x, sech x) so large |x| cannot overflow.
WaveValue gauge_envelope(const QesState& s, double x);

/// psi = exp(-g) phi, the e^{-i b sinh x / 2} branch, with its derivative.
WaveValue gauge_wavefunction(const QesState& s, double x);

/// max over the grid of |-psi'' + V psi - E psi| / (1 + |E psi|), with psi''
/// from an 8th-order central difference of the closed form.
double verify_schrodinger_residual(const QesState& s, const std::vector<double>& x_grid);

} // namespace qeslab
