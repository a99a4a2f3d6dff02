#include "qeslab/semiclassics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qeslab/errors.hpp"
#include "qeslab/numerics/quadrature.hpp"
#include "qeslab/numerics/roots.hpp"
#include "qeslab/qes_core.hpp"

namespace qeslab {

namespace {

constexpr double kPi = std::numbers::pi;

double sqrt_gap_integral(const ModelParams& p, double E, double x1) {
  QuadOptions qo;
  qo.abs_tol = 1e-13;
  qo.endpoint_singular = true;
  return quad_adaptive([&](double x) { return std::sqrt(std::max(0.0, E - eval_potential(p, x))); }, -x1, x1, qo)
      .value;
}

} // namespace

double action_integral(const ModelParams& p, double E) {
  const TurningPoints tp = turning_points(p, E);
  if (!tp.valley_pair) {
    std::ostringstream msg;
    msg << "action_integral: E=" << E << " is not inside the valley for b=" << p.b << ", n=" << p.n;
    throw DomainError(msg.str());
  }
  return sqrt_gap_integral(p, E, tp.valley_pair->second);
}

double valley_action_max(const ModelParams& p) {
  const ShapeReport s = shape_report(p);
  if (s.shape != Shape::DoubleBarrier) return 0.0;
  return sqrt_gap_integral(p, s.v_peak, s.x_peak);
}

std::vector<WkbLevel> wkb_levels(const ModelParams& p) {
  const ShapeReport s = shape_report(p);
  std::vector<WkbLevel> out;
  if (s.shape != Shape::DoubleBarrier) return out;
  const double lo = s.v_center + 1e-10 * (1.0 + std::abs(s.v_center));
  const double hi = s.v_peak - 1e-10 * (1.0 + std::abs(s.v_peak));
  if (!(lo < hi)) return out;
  const double top = action_integral(p, hi);
  const std::vector<QesState> qes = qes_spectrum(p);

  for (int m = 1;; ++m) {
    const double target = (m - 0.5) * kPi;
    if (target >= top) break;
    WkbLevel level;
    level.m = m;
    level.E = find_root([&](double E) { return action_integral(p, E) - target; }, lo, hi, 1e-13);
    level.action = action_integral(p, level.E);
    if (m <= p.n) {
      const double exact = qes[static_cast<std::size_t>(m - 1)].energy;
      if (exact != 0.0) level.percent_error_vs_qes = std::abs(level.E - exact) / std::abs(exact) * 100.0;
    }
    out.push_back(level);
  }
  return out;
}

int small_b_capacity(int n) {
  if (n < 1) throw DomainError("small_b_capacity: n must be >= 1");
  const double limit = kPi * std::sqrt(n * static_cast<double>(n) - 0.25);
  int m = 0;
  while ((m + 0.5) * kPi <= limit) ++m;
  return m;
}

double critical_b_peak_merge(int n) {
  if (n < 1) throw DomainError("critical_b_peak_merge: n must be >= 1");
  return std::sqrt(4.0 * n * static_cast<double>(n) - 1.0);
}

double critical_b_level_exit(int n, int level_index) {
  if (n < 1 || level_index < 1 || level_index > n) throw DomainError("critical_b_level_exit: need 1 <= level <= n");
  const double merge = critical_b_peak_merge(n);
  // E_level(b) - v_peak(b); v_peak from the closed form so it stays smooth up to merge_b.
  auto gap = [&](double b) {
    const ModelParams p{b, n};
    const double e = qes_spectrum(p)[static_cast<std::size_t>(level_index - 1)].energy;
    return e - (0.25 * b * b - 0.5 * b * merge);
  };
  constexpr int kScan = 96;
  const double lo = 1e-4;
  const double hi = merge * (1.0 - 1e-9);
  double b_prev = lo;
  double g_prev = gap(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double b = lo * std::pow(hi / lo, static_cast<double>(k) / kScan);
    const double g = gap(b);
    if (g_prev < 0.0 && g >= 0.0) return find_root(gap, b_prev, b, 1e-13);
    b_prev = b;
    g_prev = g;
  }
  std::ostringstream msg;
  msg << "critical_b_level_exit: level " << level_index << " of n=" << n << " never crosses the barrier top on ("
      << lo << ", " << merge << ")";
  throw BracketError(msg.str());
}

CriticalCouplings critical_couplings(int n) {
  CriticalCouplings c;
  c.n = n;
  c.peak_merge_b = critical_b_peak_merge(n);
  for (int level = 1; level <= n; ++level) {
    try {
      c.level_exit_b.push_back(critical_b_level_exit(n, level));
      c.exiting_levels.push_back(level);
    } catch (const BracketError&) {
    }
  }
  return c;
}

} // namespace qeslab
