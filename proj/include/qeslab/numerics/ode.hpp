#pragma once

// Dormand-Prince 5(4) integrator with PI step-size control over Eigen
// column vectors of real or complex scalars.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qeslab/errors.hpp"

namespace qeslab {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0; ///< 0 selects an automatic first step
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 20'000'000;
  /// When positive the controller is disabled and this step is used throughout.
  double fixed_step = 0.0;
  /// Times (inside the span) at which the solution is recorded exactly.
  std::vector<double> sample_times;
};

template <typename Vec>
struct OdeResult {
  double t = 0.0;
  Vec y;
  long steps = 0;
  long rejected = 0;
  long evaluations = 0;
  std::vector<double> sample_t;
  std::vector<Vec> samples;
};

struct NoObserver {
  template <typename Vec>
  void operator()(double, const Vec&) const {}
};

namespace detail {

// Butcher tableau of the Dormand-Prince pair.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <typename Vec>
std::vector<std::complex<double>> to_complex_vector(const Vec& y) {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = std::complex<double>(y[i]);
  return out;
}

} // namespace detail

/// Integrate y' = rhs(t, y) from t0 to t1 (either direction).
/// The observer is called as observer(t, y) after every accepted step.
template <typename Derived, typename Rhs, typename Observer = NoObserver>
auto integrate_ode(Rhs&& rhs, double t0, double t1, const Eigen::MatrixBase<Derived>& y0, const OdeOptions& opts,
                   Observer&& observer = {}) -> OdeResult<typename Derived::PlainObject> {
  using Vec = typename Derived::PlainObject;
  using DP = detail::DormandPrince;
  OdeResult<Vec> out;
  out.t = t0;
  out.y = y0;
  if (t0 == t1) return out;
  if (!(opts.rel_tol > 0.0 || opts.abs_tol > 0.0) && opts.fixed_step <= 0.0)
    throw DomainError("integrate_ode: at least one tolerance must be positive");

  const double dir = t1 > t0 ? 1.0 : -1.0;
  std::vector<double> samples;
  for (double s : opts.sample_times)
    if ((s - t0) * dir >= 0.0 && (t1 - s) * dir >= 0.0) samples.push_back(s);
  std::sort(samples.begin(), samples.end(), [dir](double l, double r) { return l * dir < r * dir; });
  std::size_t next_sample = 0;
  while (next_sample < samples.size() && samples[next_sample] == t0) {
    out.sample_t.push_back(t0);
    out.samples.push_back(Vec(y0));
    ++next_sample;
  }

  Vec y = y0.derived();
  double t = t0;
  Vec k1 = rhs(t, y);
  ++out.evaluations;

  auto error_norm = [&](const Vec& ynew, const Vec& err) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(err[i]) / scale;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, y.size())));
  };

  double h;
  if (opts.fixed_step > 0.0) {
    h = opts.fixed_step;
  } else if (opts.initial_step > 0.0) {
    h = opts.initial_step;
  } else {
    // Hairer-Wanner starting step heuristic.
    const double d0 = error_norm(y, y), d1 = error_norm(y, k1);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t1 - t0));
    const Vec y1 = y + (dir * h0) * k1;
    const Vec f1 = rhs(t + dir * h0, y1);
    ++out.evaluations;
    const double d2 = error_norm(y, f1 - k1) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, opts.max_step);

  constexpr double kSafety = 0.9, kFacMin = 0.2, kFacMax = 10.0;
  constexpr double kBeta = 0.04, kAlpha = 0.2 - 0.75 * kBeta;
  double err_prev = 1e-4;
  bool last_rejected = false;

  while ((t1 - t) * dir > 0.0) {
    if (out.steps + out.rejected >= opts.max_steps) {
      std::ostringstream msg;
      msg << "integrate_ode: step budget exhausted at t=" << t;
      throw StiffnessError(msg.str(), t, detail::to_complex_vector(y));
    }
    double target = t1;
    if (next_sample < samples.size()) target = samples[next_sample];
    double step = std::min(h, std::abs(target - t));
    bool hits_target = step >= std::abs(target - t) * (1.0 - 1e-12);
    if (hits_target) step = std::abs(target - t);
    if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) && !hits_target) {
      std::ostringstream msg;
      msg << "integrate_ode: step size underflow at t=" << t;
      throw StiffnessError(msg.str(), t, detail::to_complex_vector(y));
    }
    const double hs = dir * step;

    const Vec k2 = rhs(t + DP::c2 * hs, (y + hs * (DP::a21 * k1)).eval());
    const Vec k3 = rhs(t + DP::c3 * hs, (y + hs * (DP::a31 * k1 + DP::a32 * k2)).eval());
    const Vec k4 = rhs(t + DP::c4 * hs, (y + hs * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3)).eval());
    const Vec k5 =
        rhs(t + DP::c5 * hs, (y + hs * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4)).eval());
    const double t_new = hits_target ? target : t + hs;
    const Vec k6 =
        rhs(t_new, (y + hs * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5)).eval());
    const Vec y_new = y + hs * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
    const Vec k7 = rhs(t_new, y_new);
    out.evaluations += 6;

    double err = 0.0;
    if (opts.fixed_step <= 0.0) {
      const Vec e = hs * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);
      err = error_norm(y_new, e);
      if (!std::isfinite(err)) err = 1e10;
    }

    if (err <= 1.0) {
      t = t_new;
      y = y_new;
      k1 = k7;
      ++out.steps;
      observer(t, y);
      if (hits_target && next_sample < samples.size() && target == samples[next_sample]) {
        while (next_sample < samples.size() && samples[next_sample] == target) {
          out.sample_t.push_back(t);
          out.samples.push_back(y);
          ++next_sample;
        }
      }
      if (opts.fixed_step <= 0.0) {
        const double e = std::max(err, 1e-10);
        double fac = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
        fac = std::clamp(fac, kFacMin, kFacMax);
        if (last_rejected) fac = std::min(fac, 1.0);
        // A step shortened to land on a target does not shrink the controller's h.
        h = std::min(std::max(h, step) * fac, opts.max_step);
        err_prev = e;
      }
      last_rejected = false;
    } else {
      ++out.rejected;
      last_rejected = true;
      h = step * std::max(kFacMin, kSafety * std::pow(err, -kAlpha));
    }
  }
  out.t = t;
  out.y = y;
  return out;
}

} // namespace qeslab
