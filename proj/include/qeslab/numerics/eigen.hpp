#pragma once

#include <complex>
#include <type_traits>

#include <Eigen/Dense>

namespace qeslab {

/// Full eigendecomposition of a small dense matrix.
///
/// Eigenvalues are sorted by real part (ties by imaginary part). Each
/// eigenvector column has unit 2-norm and its first non-negligible component
/// is real positive. Eigenvalues with |Im| < 1e-9 (1 + |Re|) are snapped to
/// the real axis; larger imaginary parts are kept as computed.
struct EigenSystem {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  /// Set when the eigenvector matrix is numerically singular (a Jordan block
  /// or a cluster the solver could not separate). Not an error.
  bool defective = false;
};

inline constexpr int kMaxEigenDimension = 64;

/// Real input: Hessenberg reduction followed by shifted (Francis) QR.
EigenSystem eigensystem_small(const Eigen::MatrixXd& m);

/// Complex input: characteristic polynomial of the Hessenberg form, Aberth
/// simultaneous root iteration, then inverse iteration for the vectors.
EigenSystem eigensystem_small(const Eigen::MatrixXcd& m);

template <typename Derived>
EigenSystem eigensystem_small(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if constexpr (std::is_floating_point_v<Scalar>) {
    return eigensystem_small(Eigen::MatrixXd(m.template cast<double>()));
  } else {
    return eigensystem_small(Eigen::MatrixXcd(m.template cast<std::complex<double>>()));
  }
}

/// Max-row-sum norm, the scale used by the residual contract.
template <typename Derived>
double max_row_sum_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Snap threshold shared by every caller that checks reality.
inline bool is_effectively_real(std::complex<double> z) {
  return std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z.real()));
}

} // namespace qeslab
