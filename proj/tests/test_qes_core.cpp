#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qeslab/errors.hpp"
#include "qeslab/numerics/eigen.hpp"
#include "qeslab/qes_core.hpp"

using namespace qeslab;
using cd = std::complex<double>;

namespace {

const double kBs[] = {0.1, 0.5, 1.0, 2.0, 5.0};

// e^{g} (-d^2/dx^2 + V) e^{-g} z^k at x, with z = sinh x, from the Schrodinger
// operator itself (8th-order central differences), independent of the matrix.
cd gauged_hamiltonian_on_monomial(const ModelParams& p, int k, double x) {
  auto psi = [&](double y) {
    const cd g = cd(0.0, p.b * std::sinh(y) / 2) + (p.n - 0.5) * std::log(std::cosh(y));
    return std::exp(-g) * std::pow(std::sinh(y), k);
  };
  const double h = 2e-3;
  const double w[5] = {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  cd second = w[0] * psi(x);
  for (int j = 1; j <= 4; ++j) second += w[j] * (psi(x + j * h) + psi(x - j * h));
  second /= h * h;
  const cd hpsi = -second + eval_potential(p, x) * psi(x);
  const cd g = cd(0.0, p.b * std::sinh(x) / 2) + (p.n - 0.5) * std::log(std::cosh(x));
  return std::exp(g) * hpsi;
}

cd poly(const Eigen::VectorXcd& c, double z) {
  cd v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * z + c[k];
  return v;
}

} // namespace

TEST_CASE("H_g matrix columns reproduce the gauged Schrodinger operator on monomials") {
  for (int n = 1; n <= 5; ++n)
    for (double b : {0.5, 1.0, 2.0}) {
      const ModelParams p{b, n};
      const QesMatrix m = build_hg_matrix(p);
      REQUIRE(m.entries.rows() == n);
      for (int k = 0; k < n; ++k)
        for (double x : {-1.1, -0.4, 0.3, 0.9}) {
          const cd oracle = gauged_hamiltonian_on_monomial(p, k, x);
          const cd matrix = poly(m.entries.col(k), std::sinh(x));
          // The image stays inside polynomials of degree < n: no z^n term survives.
          CHECK(std::abs(oracle - matrix) < 1e-6 * (1.0 + std::abs(oracle)));
        }
    }
}

TEST_CASE("sl(2) quadratic form equals H_g entrywise") {
  for (int n = 1; n <= 10; ++n)
    for (double b : kBs) {
      const ModelParams p{b, n};
      const auto a = build_hg_matrix(p).entries;
      const auto s = build_sl2_matrix(p).entries;
      CHECK((a - s).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("sl(2) commutation relations") {
  for (int n = 1; n <= 8; ++n) {
    const auto jp = sl2_generator(Sl2::Plus, n);
    const auto j0 = sl2_generator(Sl2::Zero, n);
    const auto jm = sl2_generator(Sl2::Minus, n);
    CHECK((jp * jm - jm * jp + 2.0 * j0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((j0 * jp - jp * j0 - jp).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((j0 * jm - jm * j0 + jm).cwiseAbs().maxCoeff() < 1e-14);
    // J0 spectrum is the spin -(n-1)/2 .. (n-1)/2.
    CHECK(j0(0, 0) == doctest::Approx(-(n - 1) / 2.0));
    CHECK(j0(n - 1, n - 1) == doctest::Approx((n - 1) / 2.0));
  }
}

TEST_CASE("n = 2 closed form") {
  const ModelParams p{1.0, 2};
  const auto m = build_hg_matrix(p).entries;
  CHECK(close(m(0, 0), cd(-2.0, 0.0), 1e-15));
  CHECK(close(m(0, 1), cd(0.0, 1.0), 1e-15));
  CHECK(close(m(1, 0), cd(0.0, -1.0), 1e-15));
  CHECK(close(m(1, 1), cd(0.0, 0.0), 1e-15));
  const auto t = to_real_similar(build_hg_matrix(p));
  CHECK(t(0, 0) == -2.0);
  CHECK(t(0, 1) == -1.0);
  CHECK(t(1, 0) == -1.0);
  const auto spec = qes_spectrum(p);
  REQUIRE(spec.size() == 2);
  CHECK(std::abs(spec[0].energy - (-1.0 - std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(spec[1].energy - (-1.0 + std::sqrt(2.0))) < 1e-12);
  for (double b : kBs) {
    // E = b^2/4 - 5/4 -+ sqrt(1 + b^2)
    const auto s = qes_spectrum({b, 2});
    CHECK(std::abs(s[0].energy - (b * b / 4 - 1.25 - std::sqrt(1.0 + b * b))) < 1e-12 * (1 + b * b));
    CHECK(std::abs(s[1].energy - (b * b / 4 - 1.25 + std::sqrt(1.0 + b * b))) < 1e-12 * (1 + b * b));
  }
}

TEST_CASE("real similar form: alternating structure and preserved spectrum") {
  for (int n = 1; n <= 8; ++n)
    for (double b : kBs) {
      const QesMatrix m = build_hg_matrix({b, n});
      const Eigen::MatrixXd t = to_real_similar(m);
      // Band: rows k-2 .. k+1 only.
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k)
          if (r < k - 2 || r > k + 1) CHECK(t(r, k) == 0.0);
      Eigen::VectorXcd s(n);
      for (int k = 0; k < n; ++k) s[k] = std::pow(cd(0.0, 1.0), k);
      const Eigen::MatrixXcd back = s.asDiagonal().inverse() * m.entries * s.asDiagonal();
      CHECK((back - t.cast<cd>()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + b * b));
      const auto ea = eigensystem_small(t), eb = eigensystem_small(m.entries);
      for (int k = 0; k < n; ++k) CHECK(std::abs(ea.eigenvalues[k] - eb.eigenvalues[k]) < 1e-9 * (1.0 + b * b + n * n));
    }
  QesMatrix bad = build_hg_matrix({1.0, 3});
  bad.entries(0, 1) = cd(1.0, 0.0); // odd offset must be imaginary
  CHECK_THROWS_AS(to_real_similar(bad), StructuralError);
  bad = build_hg_matrix({1.0, 4});
  bad.entries(0, 3) = 0.5; // outside the band
  CHECK_THROWS_AS(to_real_similar(bad), StructuralError);
}

TEST_CASE("spectrum: real, ascending, eigenvectors, trace") {
  for (int n = 1; n <= 10; ++n)
    for (double b : kBs) {
      const ModelParams p{b, n};
      const auto m = build_hg_matrix(p).entries;
      const auto spec = qes_spectrum(p);
      REQUIRE(static_cast<int>(spec.size()) == n);
      double trace = 0.0;
      for (int k = 0; k < n; ++k) {
        const auto& s = spec[static_cast<std::size_t>(k)];
        CHECK(s.level_index == k + 1);
        if (k > 0) CHECK(spec[static_cast<std::size_t>(k - 1)].energy <= s.energy);
        CHECK(std::abs(s.coeffs.norm() - 1.0) < 1e-12);
        CHECK((m * s.coeffs - s.energy * s.coeffs).norm() < 1e-9 * (1.0 + max_row_sum_norm(m)));
        trace += s.energy;
      }
      CHECK(trace == doctest::Approx(m.trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("reference spectrum at b = 1") {
  const double table[5][5] = {{0.0},
                              {-2.414213562, 0.414213562},
                              {-6.340, -2.622, 0.962},
                              {-12.301, -6.523, -2.760, 1.585},
                              {-20.286, -12.405, -6.756, -2.806, 2.253}};
  for (int n = 1; n <= 5; ++n) {
    const auto spec = qes_spectrum({1.0, n});
    for (int k = 0; k < n; ++k) CHECK(std::abs(spec[static_cast<std::size_t>(k)].energy - table[n - 1][k]) < 5e-4);
  }
}

TEST_CASE("closed-form wavefunctions satisfy the Schrodinger equation") {
  const auto grid = linspace(-10.0, 10.0, 201);
  for (int n = 1; n <= 5; ++n)
    for (double b : {0.5, 1.0, 2.0})
      for (const auto& s : qes_spectrum({b, n})) CHECK(verify_schrodinger_residual(s, grid) <= 1e-6);
  // A wrong energy is caught.
  auto s = qes_spectrum({1.0, 2})[0];
  s.energy += 0.01;
  CHECK(verify_schrodinger_residual(s, grid) > 1e-3);
}

TEST_CASE("wavefunction evaluation: direct formula, derivative, overflow safety") {
  const auto s = qes_spectrum({1.0, 3})[1];
  for (double x : linspace(-3.0, 3.0, 25)) {
    const cd g = cd(0.0, std::sinh(x) / 2) + 2.5 * std::log(std::cosh(x));
    const cd direct = std::exp(-g) * poly(s.coeffs, std::sinh(x));
    const WaveValue w = gauge_wavefunction(s, x);
    CHECK(close(w.psi, direct, 1e-12));
    const double h = 1e-5;
    const cd fd = (gauge_wavefunction(s, x + h).psi - gauge_wavefunction(s, x - h).psi) / (2 * h);
    CHECK(close(w.dpsi, fd, 1e-8));
  }
  const WaveValue far = gauge_envelope(s, 650.0);
  CHECK(std::isfinite(far.psi.real()));
  CHECK(std::isfinite(far.dpsi.real()));
  // Envelope decays like sech^(1/2): |psi|^2 cosh x tends to |c_{n-1}|^2 2^{...} constant.
  const double r1 = std::norm(gauge_envelope(s, 30.0).psi) * std::cosh(30.0);
  const double r2 = std::norm(gauge_envelope(s, 40.0).psi) * std::cosh(40.0);
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
  const GaugeFactor gf{{1.0, 3}};
  CHECK(close(gf.value(0.7), cd(0.0, std::sinh(0.7) / 2) + 2.5 * std::log(std::cosh(0.7)), 1e-14));
}
