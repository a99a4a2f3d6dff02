#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "qeslab/errors.hpp"

namespace qeslab {

struct RootBracket {
  double root;
  double lo; ///< f(lo) and f(hi) differ in sign (or one is exactly zero)
  double hi;
  int iterations;
};

/// Brent's method: bisection safeguarded secant / inverse quadratic steps.
/// Returns a bracket of width <= tol that still contains the sign change.
template <typename F>
RootBracket find_root_bracket(F&& f, double lo, double hi, double tol, int max_iterations = 300) {
  auto eval = [&](double x) {
    const double v = f(x);
    if (std::isnan(v)) {
      std::ostringstream msg;
      msg << "find_root: f(" << x << ") is NaN";
      throw BracketError(msg.str());
    }
    return v;
  };

  double a = lo, b = hi;
  double fa = eval(a), fb = eval(b);
  if (fa == 0.0) return {a, a, a, 0};
  if (fb == 0.0) return {b, b, b, 0};
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << fa << ", " << fb << ")";
    throw BracketError(msg.str());
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 1; iter <= max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) {
      if (fb == 0.0) return {b, b, b, iter};
      return {b, std::min(b, c), std::max(b, c), iter};
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = eval(b);
  }
  throw IterationBudgetError("find_root: iteration budget exhausted");
}

template <typename F>
double find_root(F&& f, double lo, double hi, double tol) {
  return find_root_bracket(std::forward<F>(f), lo, hi, tol).root;
}

} // namespace qeslab
