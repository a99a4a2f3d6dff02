#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace qeslab {

/// V(x) = -(b^2/4) sinh^2 x - (n^2 - 1/4) sech^2 x.
struct ModelParams {
  double b = 1.0;
  int n = 1;

  /// Throws DomainError unless b > 0 (finite) and n >= 1.
  void validate() const;
  [[nodiscard]] double well_depth() const { return n * static_cast<double>(n) - 0.25; } // n^2 - 1/4
};

/// Overflow-safe for |x| up to 700; saturates at -DBL_MAX beyond that.
double eval_potential(const ModelParams& p, double x);
double potential_derivative(const ModelParams& p, double x);
double potential_second_derivative(const ModelParams& p, double x);

enum class Shape { DoubleBarrier, SingleHump };

struct ShapeReport {
  Shape shape = Shape::SingleHump;
  double x_peak = 0.0; ///< positive peak location; 0 for a single hump
  double v_peak = 0.0;
  double v_center = 0.0;
  double merge_b = 0.0; ///< sqrt(4 n^2 - 1), where the two peaks merge
};

ShapeReport shape_report(const ModelParams& p);

struct TurningPoints {
  std::vector<double> points; ///< ascending, symmetric about 0
  std::optional<std::pair<double, double>> valley_pair;
};

/// Roots of V(x) = E from the quadratic in c = cosh^2 x.
TurningPoints turning_points(const ModelParams& p, double E);

/// v_center < E < v_peak with a 1e-12 exclusion margin at both ends.
bool in_valley(const ModelParams& p, double E);
bool in_valley(const ShapeReport& shape, double E);

} // namespace qeslab
