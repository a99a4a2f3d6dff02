#include "qeslab/numerics/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "qeslab/errors.hpp"

namespace qeslab {
namespace {

using cd = std::complex<double>;

void check_dimension(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw DomainError("eigensystem_small: matrix must be square");
  if (rows < 1 || rows > kMaxEigenDimension) {
    std::ostringstream msg;
    msg << "eigensystem_small: dimension " << rows << " outside [1, " << kMaxEigenDimension << "]";
    throw DomainError(msg.str());
  }
}

void phase_normalize(Eigen::Ref<Eigen::VectorXcd> v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * big) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = cd(v[i].real(), 0.0);
      return;
    }
  }
}

EigenSystem finalize(Eigen::VectorXcd values, Eigen::MatrixXcd vectors) {
  const Eigen::Index n = values.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (is_effectively_real(values[k])) values[k] = cd(values[k].real(), 0.0);
    phase_normalize(vectors.col(k));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[static_cast<std::size_t>(k)]];
    out.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.eigenvectors);
  const auto& sv = svd.singularValues();
  out.defective = sv[n - 1] < 1e-8 * sv[0];
  return out;
}

// Characteristic polynomial det(H - lambda I) of an upper Hessenberg matrix,
// ascending coefficients.
Eigen::VectorXcd hessenberg_charpoly(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  std::vector<Eigen::VectorXcd> p(static_cast<std::size_t>(n + 1));
  p[0] = Eigen::VectorXcd::Ones(1);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Eigen::VectorXcd pk = Eigen::VectorXcd::Zero(k + 1);
    const Eigen::VectorXcd& prev = p[static_cast<std::size_t>(k - 1)];
    // (h_kk - lambda) p_{k-1}
    pk.head(k) += h(k - 1, k - 1) * prev;
    pk.tail(k) -= prev;
    cd sub_product = 1.0;
    for (Eigen::Index i = k - 1; i >= 1; --i) {
      sub_product *= h(i, i - 1); // prod_{m=i+1}^{k} h_{m,m-1} in 1-based indexing
      const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
      const Eigen::VectorXcd& pi = p[static_cast<std::size_t>(i - 1)];
      pk.head(pi.size()) += sign * h(i - 1, k - 1) * sub_product * pi;
    }
    p[static_cast<std::size_t>(k)] = pk;
  }
  return p[static_cast<std::size_t>(n)];
}

std::pair<cd, cd> horner_with_derivative(const Eigen::VectorXcd& c, cd z) {
  cd value = c[c.size() - 1];
  cd deriv = 0.0;
  for (Eigen::Index k = c.size() - 2; k >= 0; --k) {
    deriv = deriv * z + value;
    value = value * z + c[k];
  }
  return {value, deriv};
}

// Aberth-Ehrlich simultaneous iteration.
std::vector<cd> polynomial_roots(const Eigen::VectorXcd& c) {
  const Eigen::Index deg = c.size() - 1;
  std::vector<cd> z(static_cast<std::size_t>(deg));
  const cd lead = c[deg];
  const cd centre = -c[deg - 1] / (static_cast<double>(deg) * lead);
  // Radius from the Fujiwara-type bound around the centroid.
  double radius = 0.0;
  for (Eigen::Index k = 0; k < deg; ++k)
    radius = std::max(radius, std::pow(std::abs(c[k] / lead), 1.0 / static_cast<double>(deg - k)));
  radius = std::max(radius, 1e-3);
  for (Eigen::Index k = 0; k < deg; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(deg) + 0.4;
    z[static_cast<std::size_t>(k)] = centre + 0.5 * radius * cd(std::cos(angle), std::sin(angle));
  }

  for (int iter = 0; iter < 2000; ++iter) {
    double largest = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      auto [value, deriv] = horner_with_derivative(c, z[k]);
      if (value == cd(0.0)) continue;
      const cd ratio = value / deriv;
      cd repulsion = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k && z[j] != z[k]) repulsion += 1.0 / (z[k] - z[j]);
      const cd step = ratio / (1.0 - ratio * repulsion);
      if (!(std::isfinite(step.real()) && std::isfinite(step.imag()))) continue;
      z[k] -= step;
      largest = std::max(largest, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (largest < 1e-15) break;
  }
  for (const cd& r : z)
    if (!(std::isfinite(r.real()) && std::isfinite(r.imag())))
      throw IterationBudgetError("eigensystem_small: characteristic root iteration diverged");
  return z;
}

double residual(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v, cd lambda) {
  return (m * v - lambda * v).norm();
}

} // namespace

EigenSystem eigensystem_small(const Eigen::MatrixXd& m) {
  check_dimension(m.rows(), m.cols());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw IterationBudgetError("eigensystem_small: Hessenberg QR did not converge");
  return finalize(solver.eigenvalues(), solver.eigenvectors());
}

EigenSystem eigensystem_small(const Eigen::MatrixXcd& m) {
  check_dimension(m.rows(), m.cols());
  const Eigen::Index n = m.rows();
  if (n == 1) return finalize(m.diagonal(), Eigen::MatrixXcd::Ones(1, 1));

  Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hess(m);
  const Eigen::MatrixXcd h = hess.matrixH();
  const std::vector<cd> roots = polynomial_roots(hessenberg_charpoly(h));

  const double scale = std::max(1.0, max_row_sum_norm(m));
  Eigen::VectorXcd values(n);
  Eigen::MatrixXcd vectors(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

  for (Eigen::Index k = 0; k < n; ++k) {
    cd lambda = roots[static_cast<std::size_t>(k)];
    // Cluster partners already processed: keep the new vector independent of theirs.
    std::vector<Eigen::Index> cluster;
    for (Eigen::Index j = 0; j < k; ++j)
      if (std::abs(values[j] - lambda) <= 1e-6 * scale) cluster.push_back(j);

    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, cd(0.01, 0.005));
    v[k % n] += 1.0;
    v.normalize();
    const cd shift = lambda + cd(1e-13 * scale, 1e-13 * scale);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m - shift * id);
    for (int iter = 0; iter < 6; ++iter) {
      for (Eigen::Index j : cluster) v -= vectors.col(j).dot(v) * vectors.col(j);
      Eigen::VectorXcd y = lu.solve(v);
      if (!y.allFinite() || y.norm() == 0.0) break;
      v = y / y.norm();
    }
    for (Eigen::Index j : cluster) v -= vectors.col(j).dot(v) * vectors.col(j);
    if (v.norm() > 0.0) v.normalize();

    // Rayleigh quotient sharpens the root when it lowers the residual.
    const cd rq = v.dot(m * v);
    if (residual(m, v, rq) < residual(m, v, lambda)) lambda = rq;
    values[k] = lambda;
    vectors.col(k) = v;
  }
  return finalize(values, vectors);
}

} // namespace qeslab
