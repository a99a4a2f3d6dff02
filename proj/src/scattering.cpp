#include "qeslab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "qeslab/errors.hpp"
#include "qeslab/numerics/ode.hpp"
#include "qeslab/numerics/quadrature.hpp"
#include "qeslab/numerics/roots.hpp"

namespace qeslab {

using cd = std::complex<double>;

namespace {

constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

struct LocalMomentum {
  double p, dp, d2p;
};

// p = sqrt(E - V) and its first two x-derivatives; p = 0 in forbidden regions.
LocalMomentum momentum(const ModelParams& mp, double E, double x) {
  const double k2 = E - eval_potential(mp, x);
  if (!(k2 > 0.0)) return {0.0, 0.0, 0.0};
  const double v1 = potential_derivative(mp, x);
  const double v2 = potential_second_derivative(mp, x);
  const double p = std::sqrt(k2);
  return {p, -v1 / (2.0 * p), -v2 / (2.0 * p) - v1 * v1 / (4.0 * p * p * p)};
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

double outer_turning_point(const ModelParams& mp, double E) {
  const TurningPoints tp = turning_points(mp, E);
  return tp.points.empty() ? 0.0 : tp.points.back();
}

// h+- with the action measured from x itself (S = 0): only relative phases survive.
struct LocalPair {
  cd h_plus, dh_plus, h_minus, dh_minus;
};

LocalPair local_pair(const LocalMomentum& m) {
  const double amp = 1.0 / std::sqrt(m.p);
  const double shift = m.dp / (2.0 * m.p);
  return {amp, cd(-shift, m.p) * amp, amp, cd(-shift, -m.p) * amp};
}

std::string to_string_e(double E) {
  std::ostringstream s;
  s.precision(17);
  s << E;
  return s.str();
}

} // namespace

double wkb_validity(const ModelParams& mp, double E, double x) {
  const LocalMomentum m = momentum(mp, E, x);
  if (m.p == 0.0) return std::numeric_limits<double>::infinity();
  const double q = m.dp / m.p;
  return std::abs(0.75 * q * q - 0.5 * m.d2p / m.p) / (m.p * m.p);
}

WkbReference wkb_basis(const ModelParams& mp, double E, double x, double threshold) {
  mp.validate();
  WkbReference out;
  out.validity = wkb_validity(mp, E, x);
  if (!(out.validity <= threshold)) {
    std::ostringstream msg;
    msg << "wkb_basis: validity parameter " << out.validity << " at x=" << x << " exceeds " << threshold;
    throw RegimeError(msg.str());
  }
  const double xt = outer_turning_point(mp, E);
  const double ax = std::abs(x);
  QuadOptions qo;
  qo.abs_tol = 1e-10 * std::max(1.0, std::sqrt(std::abs(E - eval_potential(mp, x))));
  qo.endpoint_singular = xt > 0.0;
  const auto s = quad_adaptive([&](double y) { return std::sqrt(std::max(0.0, E - eval_potential(mp, y))); }, xt, ax,
                               qo);
  out.action = std::copysign(s.value, x);

  const LocalMomentum m = momentum(mp, E, x);
  const LocalPair lp = local_pair(m);
  const cd phase = std::polar(1.0, out.action);
  out.h_plus = lp.h_plus * phase;
  out.dh_plus = lp.dh_plus * phase;
  out.h_minus = lp.h_minus * std::conj(phase);
  out.dh_minus = lp.dh_minus * std::conj(phase);
  return out;
}

double auto_match_point(const ModelParams& mp, double E, double threshold) {
  const ShapeReport shape = shape_report(mp);
  double x = std::max({outer_turning_point(mp, E), shape.x_peak, 0.25}) + 0.25;
  x = 0.25 * std::ceil(x / 0.25);
  for (; x <= 60.0; x += 0.25)
    if (wkb_validity(mp, E, x) <= threshold) return x;
  throw RegimeError("auto_match_point: WKB validity never reached below x = 60 for E = " + to_string_e(E));
}

ScatteringResult transmission(const ModelParams& mp, double E, const ScatteringOptions& opts) {
  mp.validate();
  if (!std::isfinite(E)) throw DomainError("transmission: energy must be finite");
  ScatteringResult res;
  res.E = E;
  res.x_match = opts.x_match > 0.0 ? opts.x_match : auto_match_point(mp, E, opts.validity_threshold);
  const double xm = res.x_match;

  const WkbReference right = wkb_basis(mp, E, xm, opts.validity_threshold);
  const WkbReference left = wkb_basis(mp, E, -xm, opts.validity_threshold);

  OdeOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.abs_tol = opts.abs_tol;

  cd psi, dpsi;
  if (opts.coordinate == Coordinate::U) {
    // (1+u^2) y'' + u y' + (E - V) y = 0 as a first-order system in (y, psi_x).
    const double quarter_b2 = 0.25 * mp.b * mp.b;
    const double depth = mp.well_depth();
    auto rhs = [&](double u, const Eigen::Vector2cd& s) {
      const double c2 = 1.0 + u * u;
      const double inv_c = 1.0 / std::sqrt(c2);
      const double v = -quarter_b2 * u * u - depth / c2;
      return Eigen::Vector2cd(s[1] * inv_c, (v - E) * inv_c * s[0]);
    };
    oo.max_step = opts.max_step_u;
    const double um = std::sinh(xm);
    auto sol = integrate_ode(rhs, um, -um, Eigen::Vector2cd(right.h_plus, right.dh_plus), oo);
    psi = sol.y[0];
    dpsi = sol.y[1];
    res.steps = sol.steps;
  } else {
    auto rhs = [&](double x, const Eigen::Vector2cd& s) {
      return Eigen::Vector2cd(s[1], (eval_potential(mp, x) - E) * s[0]);
    };
    auto sol = integrate_ode(rhs, xm, -xm, Eigen::Vector2cd(right.h_plus, right.dh_plus), oo);
    psi = sol.y[0];
    dpsi = sol.y[1];
    res.steps = sol.steps;
  }

  // psi = A h+ + B h- on the left; W[h+, h-] = 2i.
  const cd a = (dpsi * left.h_minus - psi * left.dh_minus) / (2.0 * kI);
  const cd b = (left.dh_plus * psi - left.h_plus * dpsi) / (2.0 * kI);
  res.t = 1.0 / a;
  res.r = b / a;
  res.refl_prob = std::norm(res.r);
  res.trans_prob = std::norm(res.t);
  res.unitarity_defect = res.refl_prob + res.trans_prob - 1.0;
  res.flagged = !(std::abs(res.unitarity_defect) <= opts.unitarity_tol);
  return res;
}

double phase_difference(const ModelParams& mp, double E, double x_match, const ScatteringOptions& opts) {
  mp.validate();
  const double um = std::sinh(x_match);
  const double quarter_b2 = 0.25 * mp.b * mp.b;
  const double depth = mp.well_depth();
  auto rhs = [&](double u, const Eigen::Vector2d& s) {
    const double c2 = 1.0 + u * u;
    const double inv_c = 1.0 / std::sqrt(c2);
    const double v = -quarter_b2 * u * u - depth / c2;
    return Eigen::Vector2d(s[1] * inv_c, (v - E) * inv_c * s[0]);
  };
  OdeOptions oo;
  oo.rel_tol = opts.phase_rel_tol;
  oo.abs_tol = 1e-3 * opts.phase_rel_tol;
  oo.max_step = opts.max_step_u;

  const LocalMomentum m = momentum(mp, E, x_match);
  if (m.p == 0.0) throw RegimeError("phase_difference: x_match lies in a forbidden region");
  const LocalPair lp = local_pair(m);

  auto channel_phase = [&](const Eigen::Vector2d& y0) {
    // Pruefer angle arg(psi - i psi'), unwrapped after every accepted step.
    double last = std::atan2(-y0[1], y0[0]);
    double total = last;
    auto observer = [&](double, const Eigen::Vector2d& y) {
      const double now = std::atan2(-y[1], y[0]);
      total += wrap_angle(now - last);
      last = now;
    };
    const auto sol = integrate_ode(rhs, 0.0, um, y0, oo, observer);
    const double y = sol.y[0], w = sol.y[1];
    // Rescale to arg(p psi - i psi'), which tracks the WKB phase.
    const double scaled = total + wrap_angle(std::atan2(-w, m.p * y) - std::atan2(-w, y));
    const cd alpha = (w * lp.h_minus - y * lp.dh_minus) / (2.0 * kI);
    const double exact = std::arg(alpha);
    return exact + 2.0 * kPi * std::round((scaled - exact) / (2.0 * kPi));
  };
  return channel_phase(Eigen::Vector2d(1.0, 0.0)) - channel_phase(Eigen::Vector2d(0.0, 1.0));
}

ScanResult reflection_scan(const ModelParams& mp, const std::vector<double>& E_grid, const ScatteringOptions& opts,
                           unsigned threads) {
  mp.validate();
  ScanResult out;
  out.points.resize(E_grid.size());
  if (E_grid.empty()) return out;

  // One matching point for the whole grid keeps the phases continuous in E.
  double xm = opts.x_match;
  if (xm <= 0.0)
    for (double E : E_grid) xm = std::max(xm, auto_match_point(mp, E, opts.validity_threshold));
  out.x_match = xm;

  auto work = [&](std::size_t i) {
    ScanPoint& pt = out.points[i];
    pt.E = E_grid[i];
    try {
      pt.phase = phase_difference(mp, pt.E, xm, opts);
      const double c = std::cos(pt.phase);
      pt.refl_prob = c * c;
    } catch (const std::exception& e) {
      pt.refl_prob = std::numeric_limits<double>::quiet_NaN();
      pt.phase = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, E_grid.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < E_grid.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < E_grid.size(); i += threads) work(i);
      });
    for (auto& th : pool) th.join();
  }

  ScatteringOptions verify = opts;
  verify.x_match = xm;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
    const ScanPoint& lo = out.points[i];
    const ScanPoint& hi = out.points[i + 1];
    if (lo.error || hi.error) continue;
    const double k_lo = std::floor(lo.phase / kPi - 0.5);
    const double k_hi = std::floor(hi.phase / kPi - 0.5);
    if (k_lo == k_hi) continue;
    for (double k = std::min(k_lo, k_hi) + 1.0; k <= std::max(k_lo, k_hi); k += 1.0) {
      const double target = (k + 0.5) * kPi;
      try {
        const double E = find_root([&](double e) { return phase_difference(mp, e, xm, opts) - target; }, lo.E, hi.E,
                                   1e-13 * (1.0 + std::abs(lo.E)));
        if (transmission(mp, E, verify).refl_prob <= 1e-6) out.tt_candidates.push_back(E);
      } catch (const NumericalError&) {
        // A crossing that cannot be refined is left out; the grid row keeps its value.
      }
    }
  }
  std::sort(out.tt_candidates.begin(), out.tt_candidates.end());
  return out;
}

} // namespace qeslab
