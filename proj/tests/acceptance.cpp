// Acceptance report: one line per criterion.
//   acceptance [--expect-fail N ...]
// Exit status is 0 when exactly the listed criteria fail.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qeslab/errors.hpp"
#include "qeslab/koleykar.hpp"
#include "qeslab/numerics/eigen.hpp"
#include "qeslab/numerics/quadrature.hpp"
#include "qeslab/qes_core.hpp"
#include "qeslab/scattering.hpp"
#include "qeslab/semiclassics.hpp"
#include "qeslab/states.hpp"

using namespace qeslab;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double round_to(double v, double unit) { return std::round(v / unit) * unit; }

std::vector<double> grid(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
  return out;
}

Outcome table_one() {
  const double printed[5][5] = {{0.0},
                                {-2.4, 0.4},
                                {-6.340, -2.622, 0.962},
                                {-12.301, -6.523, -2.760, 1.585},
                                {-20.286, -12.405, -6.756, -2.806, 2.253}};
  const bool valley[5][5] = {{false},
                             {true, false},
                             {true, false, false},
                             {true, true, false, false},
                             {true, true, true, false, false}};
  int matched = 0, pattern = 0, parens = 0;
  for (int n = 1; n <= 5; ++n) {
    const ModelParams p{1.0, n};
    const auto spec = qes_spectrum(p);
    const double unit = n <= 2 ? 0.1 : 0.001;
    for (int k = 0; k < n; ++k) {
      const double E = spec[static_cast<std::size_t>(k)].energy;
      if (std::abs(round_to(E, unit) - printed[n - 1][k]) < 1e-9) ++matched;
      const bool v = in_valley(p, E);
      parens += v ? 1 : 0;
      if (v == valley[n - 1][k]) ++pattern;
    }
  }
  const auto s2 = qes_spectrum({1.0, 2});
  const double exact = std::max(std::abs(s2[0].energy + 1.0 + std::sqrt(2.0)), std::abs(s2[1].energy + 1.0 - std::sqrt(2.0)));
  return {matched == 15 && pattern == 15 && exact <= 1e-12,
          std::to_string(matched) + "/15 energies at printed digits; valley pattern " + std::to_string(pattern) +
              "/15 (" + std::to_string(parens) + " parenthesized, as printed); n=2 exact error " + fmt("%.1e", exact)};
}

Outcome sl2_identity() {
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n)
    for (double b : {0.1, 0.5, 1.0, 2.0, 5.0})
      worst = std::max(worst, (build_sl2_matrix({b, n}).entries - build_hg_matrix({b, n}).entries).cwiseAbs().maxCoeff());
  return {worst <= 1e-13, "max entry difference " + fmt("%.1e", worst) + " over n=1..10, 5 couplings"};
}

Outcome residuals() {
  double worst = 0.0;
  const auto xs = grid(-10.0, 10.0, 401);
  for (int n = 1; n <= 5; ++n)
    for (const auto& s : qes_spectrum({1.0, n})) worst = std::max(worst, verify_schrodinger_residual(s, xs));
  return {worst <= 1e-6, "max relative residual " + fmt("%.1e", worst) + " on |x| <= 10"};
}

Outcome reflectionless() {
  double worst_r = 0.0, worst_u = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const ModelParams p{1.0, n};
    for (const auto& s : qes_spectrum(p)) {
      const auto r = transmission(p, s.energy);
      worst_r = std::max(worst_r, r.refl_prob);
      worst_u = std::max(worst_u, r.unitarity_defect);
    }
  }
  const auto control = transmission({1.0, 2}, -3.2);
  return {worst_r <= 1e-6 && worst_u <= 1e-8 && control.refl_prob >= 1e-2,
          "max |r|^2 " + fmt("%.1e", worst_r) + ", max unitarity defect " + fmt("%.1e", worst_u) +
              ", control |r|^2 at E=-3.2 " + fmt("%.3f", control.refl_prob)};
}

Outcome table_two() {
  struct Row {
    int n, m;
    double E, pct, unit;
  };
  const Row rows[] = {{2, 1, -2.173, 10, 1}, {3, 1, -6.099, 4, 1},     {4, 1, -12.070, 2, 1},  {4, 2, -6.299, 3, 1},
                      {5, 1, -20.055, 1, 1}, {5, 2, -12.208, 1.6, 0.1}, {5, 3, -6.527, 3.4, 0.1}};
  int energies = 0, percents = 0;
  for (const Row& r : rows) {
    const auto levels = wkb_levels({1.0, r.n});
    if (static_cast<int>(levels.size()) < r.m) continue;
    const auto& l = levels[static_cast<std::size_t>(r.m - 1)];
    if (std::abs(round_to(l.E, 1e-3) - r.E) < 1e-9) ++energies;
    if (l.percent_error_vs_qes && std::abs(round_to(*l.percent_error_vs_qes, r.unit) - r.pct) < 1e-9) ++percents;
  }
  return {energies == 7 && percents == 7,
          std::to_string(energies) + "/7 energies, " + std::to_string(percents) + "/7 percentages"};
}

Outcome norm_integral() {
  const auto [even, odd] = parity_combine(qes_spectrum({1.0, 1})[0]);
  const double err = std::abs(norm_squared(even).value - pi / 2 * (1.0 + std::exp(-1.0)));
  return {err <= 1e-8, "|norm - (pi/2)(1+1/e)| = " + fmt("%.1e", err)};
}

Outcome wronskian_quintet() {
  std::vector<ParityState> states;
  for (const auto& s : qes_spectrum({1.0, 2})) {
    auto [e, o] = parity_combine(s);
    states.push_back(e);
    states.push_back(o);
  }
  const double r2 = std::sqrt(2.0);
  const std::vector<std::pair<std::pair<std::string, std::string>, double>> expected = {
      {{"1+", "1-"}, r2 - 1.5}, {{"2+", "2-"}, -r2 - 1.5}, {{"1+", "2-"}, 0.5}, {{"1-", "2+"}, -0.5},
      {{"1+", "2+"}, 0.0},      {{"1-", "2-"}, 0.0}};
  double worst = 0.0, boundary = 0.0;
  int found = 0;
  try {
    for (const auto& r : self_adjoint_check(states)) {
      boundary = std::max(boundary, std::abs(r.difference));
      for (const auto& [pair, value] : expected)
        if (pair == r.pair) {
          ++found;
          worst = std::max({worst, std::abs(r.w_plus - value), std::abs(r.w_minus - value)});
        }
    }
  } catch (const NumericalError& e) {
    return {false, e.what()};
  }
  return {found == 6 && worst <= 1e-6 && boundary <= 1e-6,
          "max deviation " + fmt("%.1e", worst) + ", max boundary difference " + fmt("%.1e", boundary)};
}

Outcome critical() {
  const double c1 = 1.0 / (2.0 * std::sqrt(3.0));
  const double c2 = (5.0 * std::sqrt(15.0) - 2.0 * std::sqrt(69.0)) / 22.0;
  const double c3 = (5.0 * std::sqrt(15.0) + 2.0 * std::sqrt(69.0)) / 22.0;
  const double e = std::max({std::abs(critical_b_level_exit(1, 1) - c1), std::abs(critical_b_level_exit(2, 2) - c2),
                             std::abs(critical_b_level_exit(2, 1) - c3)});
  const bool merge = critical_b_peak_merge(1) == std::sqrt(3.0) && critical_b_peak_merge(2) == std::sqrt(15.0);
  return {e <= 1e-3 && merge, "max exit deviation " + fmt("%.1e", e) + (merge ? ", merges exact" : ", merge mismatch")};
}

Outcome small_b() {
  double worst = 0.0, extrapolated = 0.0;
  bool capacity = true;
  for (int n = 1; n <= 5; ++n) {
    const double target = pi * std::sqrt(n * n - 0.25);
    const double a4 = valley_action_max({1e-4, n});
    const double a6 = valley_action_max({1e-6, n});
    worst = std::max(worst, std::abs(a4 - target));
    // The deficit scales like sqrt(b): remove it with one Richardson step.
    extrapolated = std::max(extrapolated, std::abs((10.0 * a6 - a4) / 9.0 - target));
    capacity = capacity && small_b_capacity(n) == n;
  }
  return {worst <= 1e-3 && capacity,
          "max |action(b=1e-4) - pi sqrt(n^2-1/4)| = " + fmt("%.4f", worst) + " (deficit ~ sqrt(b)); extrapolated to b=0: " +
              fmt("%.1e", extrapolated) + "; capacity " + (capacity ? "= n" : "mismatch")};
}

Outcome companion() {
  double wr = 0.0;
  for (double a1 : {0.25, 1.0, 4.0}) wr = std::max(wr, std::abs(kk_wronskian({a1, 1.0}).value + std::sqrt(a1)));
  // Residual oracle: least-squares energy from finite differences of the closed form.
  double fit = 0.0;
  const double w[5] = {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  for (double nu : {1.0, 2.0}) {
    const KKParams p{1.0, nu};
    const KKStates s(p);
    for (int which : {1, 2}) {
      double num = 0.0, den = 0.0;
      const double h = 1e-3;
      for (double x : grid(-3.0, 3.0, 241)) {
        auto f = [&](double y) { return s.eval(which, y).psi.real(); };
        double d2 = w[0] * f(x);
        for (int j = 1; j <= 4; ++j) d2 += w[j] * (f(x + j * h) + f(x - j * h));
        d2 /= h * h;
        num += f(x) * (-d2 + kk_potential(p, x) * f(x));
        den += f(x) * f(x);
      }
      fit = std::max(fit, std::abs(num / den - kk_energy(p)));
    }
  }
  double shift = 0.0;
  const KKParams p1{0.25, 1.0};
  const ModelParams m1{1.0, 1};
  for (double x : grid(-8.0, 8.0, 161))
    shift = std::max(shift, std::abs(kk_potential(p1, x) - (eval_potential(m1, x) - 0.25)) /
                                (1.0 + std::abs(eval_potential(m1, x))));
  shift = std::max(shift, std::abs(kk_energy(p1) - (qes_spectrum(m1)[0].energy - 0.25)));
  return {wr <= 1e-6 && fit <= 1e-6 && shift <= 1e-12,
          "Wronskian deviation " + fmt("%.1e", wr) + ", fitted energy deviation " + fmt("%.1e", fit) +
              ", nu=1 shift identity " + fmt("%.1e", shift)};
}

Outcome properties() {
  std::vector<std::string> failed;
  // Flux constancy and symmetries.
  double flux_sd = 0.0, sym = 0.0, wconst = 0.0;
  const auto xs = grid(-12.0, 12.0, 200);
  for (int n = 1; n <= 5; ++n)
    for (const auto& s : qes_spectrum({1.0, n})) {
      const auto right = normalize_unit_flux({s, Direction::Right, 1.0});
      const auto left = normalize_unit_flux({s, Direction::Left, 1.0});
      double mean = 0.0, sq = 0.0;
      for (double x : xs) mean += flux(right, x);
      mean /= static_cast<double>(xs.size());
      for (double x : xs) sq += std::pow(flux(right, x) - mean, 2);
      flux_sd = std::max(flux_sd, std::sqrt(sq / static_cast<double>(xs.size())));
      const auto [e, o] = parity_combine(s);
      const cd w0 = wronskian(e, o, 0.0);
      for (double x : grid(-9.0, 9.0, 37)) {
        const WaveValue r = evaluate(right, x), l = evaluate(left, x);
        const double scale = 1.0 + std::abs(r.psi) + std::abs(r.dpsi);
        sym = std::max(sym, std::abs(l.psi - std::conj(r.psi)) / scale);
        sym = std::max(sym, std::abs(evaluate(e, -x).psi - evaluate(e, x).psi) / scale);
        sym = std::max(sym, std::abs(evaluate(o, -x).psi + evaluate(o, x).psi) / scale);
        wconst = std::max(wconst, std::abs(wronskian(e, o, x) - w0) / (1.0 + std::abs(w0)));
      }
    }
  if (flux_sd > 1e-8) failed.push_back("flux");
  if (sym > 1e-12) failed.push_back("symmetry");
  if (wconst > 1e-10) failed.push_back("wronskian");

  // Quadrature: true error never exceeds the requested tolerance along a refinement sequence.
  auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
  const double exact = (1.0 - std::exp(-3.0) * (std::cos(21.0) - 7.0 * std::sin(21.0))) / 50.0;
  bool monotone = true;
  double previous = 1.0;
  for (double tol : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const double err = std::abs(quad_adaptive(f, 0.0, 3.0, tol).value - exact);
    monotone = monotone && err <= tol && err <= previous * 1.0001 + 1e-15;
    previous = err;
  }
  if (!monotone) failed.push_back("quadrature");

  // Eigensolver residuals on seeded random complex matrices.
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  double eig = 0.0;
  for (int n = 1; n <= 16; ++n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
    const auto sys = eigensystem_small(m);
    for (int k = 0; k < n; ++k)
      eig = std::max(eig, (m * sys.eigenvectors.col(k) - sys.eigenvalues[k] * sys.eigenvectors.col(k)).norm() /
                              max_row_sum_norm(m));
  }
  if (eig > 1e-10) failed.push_back("eigensolver");

  std::string detail = "flux stdev " + fmt("%.1e", flux_sd) + ", symmetry " + fmt("%.1e", sym) + ", Wronskian drift " +
                       fmt("%.1e", wconst) + ", quadrature refinement " + (monotone ? "ok" : "broken") +
                       ", eigen residual " + fmt("%.1e", eig);
  return {failed.empty(), detail};
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expect_fail.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail N ...]\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"QES spectrum table", table_one},
      {"sl(2) algebraic identity", sl2_identity},
      {"Schrodinger residual", residuals},
      {"reflectionlessness", reflectionless},
      {"WKB level table", table_two},
      {"norm integral", norm_integral},
      {"Wronskian quintet", wronskian_quintet},
      {"critical couplings", critical},
      {"small-b capacity", small_b},
      {"companion potential", companion},
      {"property suites", properties},
  };

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::printf("[PRIMARY] criterion %d: %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu passed\n", criteria.size() - failed.size(), criteria.size());
  if (failed != expect_fail) {
    if (!expect_fail.empty()) std::printf("failures differ from the expected set\n");
    return 1;
  }
  return 0;
}
