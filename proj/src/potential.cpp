#include "qeslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qeslab/errors.hpp"

namespace qeslab {

void ModelParams::validate() const {
  if (!(std::isfinite(b) && b > 0.0) || n < 1) {
    std::ostringstream msg;
    msg << "ModelParams: need b > 0 and n >= 1 (got b=" << b << ", n=" << n << ")";
    throw DomainError(msg.str());
  }
}

namespace {

// sech^2 x in exponential form, never overflowing.
double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

} // namespace

double eval_potential(const ModelParams& p, double x) {
  const double ax = std::abs(x);
  const double well = p.well_depth() * sech2(ax);
  if (ax < 300.0) {
    const double s = std::sinh(ax);
    return -0.25 * p.b * p.b * s * s - well;
  }
  // log of (b^2/4) sinh^2 x, with sinh x = e^x (1 - e^{-2x}) / 2
  const double log_barrier = 2.0 * std::log(0.5 * p.b) + 2.0 * (ax + std::log1p(-std::exp(-2.0 * ax)) - std::log(2.0));
  if (log_barrier >= std::log(std::numeric_limits<double>::max())) return -std::numeric_limits<double>::max();
  return -std::exp(log_barrier) - well;
}

double potential_derivative(const ModelParams& p, double x) {
  const double s2 = sech2(x);
  return -0.5 * p.b * p.b * std::sinh(x) * std::cosh(x) + 2.0 * p.well_depth() * s2 * std::tanh(x);
}

double potential_second_derivative(const ModelParams& p, double x) {
  const double s2 = sech2(x);
  const double t = std::tanh(x);
  return -0.5 * p.b * p.b * std::cosh(2.0 * x) + 2.0 * p.well_depth() * s2 * (s2 - 2.0 * t * t);
}

ShapeReport shape_report(const ModelParams& p) {
  p.validate();
  ShapeReport r;
  const double q = 4.0 * p.n * static_cast<double>(p.n) - 1.0;
  r.merge_b = std::sqrt(q);
  r.v_center = -p.well_depth();
  if (p.b < r.merge_b) {
    r.shape = Shape::DoubleBarrier;
    // cosh^4 x_peak = (4n^2 - 1) / b^2
    r.x_peak = std::acosh(std::sqrt(r.merge_b / p.b));
    r.v_peak = 0.25 * p.b * p.b - 0.5 * p.b * r.merge_b;
  } else {
    r.shape = Shape::SingleHump;
    r.x_peak = 0.0;
    r.v_peak = r.v_center;
  }
  return r;
}

bool in_valley(const ShapeReport& s, double E) {
  if (s.shape != Shape::DoubleBarrier) return false;
  const double lo = s.v_center + 1e-12 * (1.0 + std::abs(s.v_center));
  const double hi = s.v_peak - 1e-12 * (1.0 + std::abs(s.v_peak));
  return E > lo && E < hi;
}

bool in_valley(const ModelParams& p, double E) { return in_valley(shape_report(p), E); }

TurningPoints turning_points(const ModelParams& p, double E) {
  p.validate();
  TurningPoints out;
  // (b^2/4) c^2 + (E - b^2/4) c + (n^2 - 1/4) = 0,  c = cosh^2 x
  const double a = 0.25 * p.b * p.b;
  const double bq = E - a;
  const double cq = p.well_depth();
  double disc = bq * bq - 4.0 * a * cq;
  const double slack = 1e-13 * (bq * bq + 4.0 * a * cq);
  if (disc < -slack) return out;
  disc = std::max(disc, 0.0);

  // Cancellation-free pair of roots.
  const double qq = -0.5 * (bq + std::copysign(std::sqrt(disc), bq));
  std::vector<double> cs;
  if (qq != 0.0) {
    cs.push_back(qq / a);
    cs.push_back(cq / qq);
  }
  std::sort(cs.begin(), cs.end());

  std::vector<double> positive;
  for (double c : cs) {
    if (c >= 1.0) positive.push_back(std::acosh(std::sqrt(c)));
    else if (c > 1.0 - 1e-13) positive.push_back(0.0);
  }
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) out.points.push_back(-*it);
  for (double x : positive) out.points.push_back(x);

  if (positive.size() == 2 && in_valley(p, E)) out.valley_pair = std::make_pair(-positive[0], positive[0]);
  return out;
}

} // namespace qeslab
