#pragma once

// Adaptive Gauss-Kronrod quadrature over finite, doubly-infinite and
// oscillatory (Fourier-type) domains. The value type follows the integrand:
// real or std::complex<double>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "qeslab/errors.hpp"

namespace qeslab {

template <typename T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
  /// Integrable inverse-square-root singularities (or square-root zeros) at
  /// both ends. Switches to x = mid + half * sin(theta).
  bool endpoint_singular = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (abscissae on [0, 1], symmetric).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <typename T>
bool finite_value(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <typename T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
};

template <typename T, typename F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(centre);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(centre - dx);
    const T f2 = f(centre + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(T(kronrod - gauss))};
}

template <typename T>
std::complex<double> as_complex(const T& v) {
  return std::complex<double>(v);
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// The error estimate is |K15 - G7| summed over panels; the panel with the
/// largest estimate is bisected until the total meets the tolerance.
template <typename F>
auto quad_adaptive(F&& f, double a, double b, const QuadOptions& opts)
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  QuadratureResult<T> out;
  if (a == b) return out;
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw DomainError("quad_adaptive: limits must be finite (use quad_improper)");
  if (a > b) {
    auto flipped = quad_adaptive(f, b, a, opts);
    flipped.value = -flipped.value;
    return flipped;
  }

  long evals = 0;
  const double mid = 0.5 * (a + b);
  const double halfwidth = 0.5 * (b - a);
  auto integrand = [&](double s) -> T {
    ++evals;
    T v;
    if (opts.endpoint_singular) {
      const double x = mid + halfwidth * std::sin(s);
      v = f(x) * (halfwidth * std::cos(s));
    } else {
      v = f(s);
    }
    if (!detail::finite_value(v)) {
      std::ostringstream msg;
      msg << "quad_adaptive: non-finite integrand at s=" << s;
      throw NumericalError(msg.str());
    }
    return v;
  };
  const double lo = opts.endpoint_singular ? -std::numbers::pi / 2 : a;
  const double hi = opts.endpoint_singular ? std::numbers::pi / 2 : b;

  auto worse = [](const detail::Panel<T>& l, const detail::Panel<T>& r) {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  };
  std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>, decltype(worse)> queue(worse);
  queue.push(detail::gauss_kronrod_15<T>(integrand, lo, hi));
  T total = queue.top().value;
  double total_error = queue.top().error;
  int subdivisions = 0;

  // Panels narrower than this cannot be split meaningfully.
  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  std::vector<detail::Panel<T>> frozen;

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total)); };
  while (total_error > target()) {
    if (queue.empty() || subdivisions >= opts.max_subdivisions) {
      std::ostringstream msg;
      msg << "quad_adaptive: budget exceeded on [" << a << ", " << b << "] (error estimate " << total_error
          << " > " << target() << ")";
      throw BudgetExceeded(msg.str(), detail::as_complex(total), total_error);
    }
    detail::Panel<T> worst = queue.top();
    queue.pop();
    const double c = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= min_width || c <= worst.a || c >= worst.b) {
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gauss_kronrod_15<T>(integrand, worst.a, c);
    auto right = detail::gauss_kronrod_15<T>(integrand, c, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift of the running updates.
  T sum{};
  double err = 0.0;
  for (const auto& p : frozen) {
    sum += p.value;
    err += p.error;
  }
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  out.value = sum;
  out.error_estimate = err;
  out.evaluations = evals;
  return out;
}

template <typename F>
auto quad_adaptive(F&& f, double a, double b, double abs_tol) {
  QuadOptions opts;
  opts.abs_tol = abs_tol;
  return quad_adaptive(std::forward<F>(f), a, b, opts);
}

/// Declared decay envelope of an integrand on |x| >= onset:
///   Exponential:  |f(x)| <= scale * exp(-rate * |x|)
///   Algebraic:    |f(x)| <= scale * |x|^(-rate),  rate > 1
struct DecayHint {
  enum class Kind { Exponential, Algebraic };
  Kind kind = Kind::Exponential;
  double scale = 1.0;
  double rate = 1.0;
  double onset = 1.0;

  [[nodiscard]] double envelope(double x) const {
    const double ax = std::abs(x);
    return kind == Kind::Exponential ? scale * std::exp(-rate * ax) : scale * std::pow(ax, -rate);
  }
  /// Bound on the integral of the envelope over both tails beyond |x| = cut.
  [[nodiscard]] double tail_bound(double cut) const {
    return kind == Kind::Exponential ? 2.0 * scale * std::exp(-rate * cut) / rate
                                     : 2.0 * scale * std::pow(cut, 1.0 - rate) / (rate - 1.0);
  }
};

/// Integral over the whole real line. The line is truncated where the tail
/// bound drops below abs_tol / 4 and the finite part is compactified
/// (x = sinh t for exponential decay, x = tan t for algebraic decay).
template <typename F>
auto quad_improper(F&& f, const DecayHint& hint, double abs_tol, int max_subdivisions = 4000)
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (!(hint.scale > 0.0 && hint.rate > 0.0 && hint.onset > 0.0 && abs_tol > 0.0))
    throw DomainError("quad_improper: envelope scale, rate, onset and tolerance must be positive");
  if (hint.kind == DecayHint::Kind::Algebraic && hint.rate <= 1.0)
    throw DomainError("quad_improper: algebraic decay needs rate > 1 for integrability");

  const double tail_budget = 0.25 * abs_tol;
  double cut = hint.onset;
  if (hint.kind == DecayHint::Kind::Exponential) {
    cut = std::max(cut, std::log(2.0 * hint.scale / (hint.rate * tail_budget)) / hint.rate);
  } else {
    cut = std::max(cut, std::pow(2.0 * hint.scale / ((hint.rate - 1.0) * tail_budget), 1.0 / (hint.rate - 1.0)));
  }

  // Envelope audit on a geometric grid of both tails.
  constexpr int kSamples = 48;
  for (int side = -1; side <= 1; side += 2) {
    for (int k = 0; k <= kSamples; ++k) {
      const double ax = hint.onset * std::pow(cut / hint.onset, static_cast<double>(k) / kSamples);
      const double x = side * ax;
      const double value = std::abs(f(x));
      const double bound = hint.envelope(x);
      if (!(value <= bound * (1.0 + 1e-9) + std::numeric_limits<double>::min())) {
        std::ostringstream msg;
        msg << "quad_improper: |f(" << x << ")| = " << value << " exceeds declared envelope " << bound;
        throw EnvelopeViolation(msg.str(), x, value, bound);
      }
    }
  }

  QuadOptions opts;
  opts.abs_tol = 0.75 * abs_tol;
  opts.max_subdivisions = max_subdivisions;
  QuadratureResult<T> inner;
  if (hint.kind == DecayHint::Kind::Exponential) {
    const double t_max = std::asinh(cut);
    inner = quad_adaptive([&](double t) -> T { return f(std::sinh(t)) * std::cosh(t); }, -t_max, t_max, opts);
  } else {
    const double t_max = std::atan(cut);
    inner = quad_adaptive(
        [&](double t) -> T {
          const double c = std::cos(t);
          return f(std::tan(t)) / (c * c);
        },
        -t_max, t_max, opts);
  }
  inner.error_estimate += hint.tail_bound(cut);
  return inner;
}

/// Fourier-type integral  int_R h(u) exp(i*omega*u) du  for omega > 0.
///
/// h must be analytic in the closed upper half plane except for
/// singularities inside the strip |Re u| < split, and |h| must stay bounded
/// by its values on the vertical lines Re u = +-split. The middle part is
/// integrated on the real axis; each tail is moved onto the vertical ray
/// u = +-split + i t, where the kernel decays like exp(-omega t).
template <typename H>
QuadratureResult<std::complex<double>> quad_fourier(H&& h, double omega, double split, double abs_tol,
                                                    int max_subdivisions = 4000) {
  using C = std::complex<double>;
  if (!(omega > 0.0 && split > 0.0 && abs_tol > 0.0))
    throw DomainError("quad_fourier: omega, split and tolerance must be positive");
  const C i{0.0, 1.0};

  QuadOptions opts;
  opts.abs_tol = abs_tol / 3.0;
  opts.max_subdivisions = max_subdivisions;
  auto middle = quad_adaptive([&](double u) -> C { return C(h(C(u, 0.0))) * std::exp(i * (omega * u)); }, -split,
                              split, opts);

  QuadratureResult<C> total = middle;
  for (int side = -1; side <= 1; side += 2) {
    const double u0 = side * split;
    double bound = 0.0;
    for (int k = 0; k <= 16; ++k) bound = std::max(bound, std::abs(C(h(C(u0, 0.25 * k)))));
    const double t_max = std::max(1.0, std::log(6.0 * std::max(bound, 1e-300) / (omega * abs_tol)) / omega);
    auto ray = quad_adaptive(
        [&](double t) -> C {
          const C u(u0, t);
          return C(h(u)) * std::exp(i * (omega * u0)) * std::exp(-omega * t);
        },
        0.0, t_max, opts);
    // Right tail runs up the ray (+i dt); the left tail runs down it (-i dt).
    total.value += (side > 0 ? i : -i) * ray.value;
    total.error_estimate += ray.error_estimate + bound * std::exp(-omega * t_max) / omega;
    total.evaluations += ray.evaluations;
  }
  return total;
}

} // namespace qeslab
