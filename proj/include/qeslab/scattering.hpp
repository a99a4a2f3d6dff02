#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qeslab/potential.hpp"

namespace qeslab {

/// Leading-order WKB pair h+- = p^-1/2 exp(+-i S), p = sqrt(E - V), with
/// S(x) = sign(x) * int_{x_t}^{|x|} p, x_t the outermost turning point (0 if none).
/// W[h+, h-] = 2i and the flux of h+ is 2.
struct WkbReference {
  std::complex<double> h_plus, dh_plus, h_minus, dh_minus;
  double action = 0.0;
  double validity = 0.0; ///< |3/4 (p'/p)^2 - 1/2 p''/p| / p^2
};

/// Second-order WKB validity parameter; +inf where E <= V(x).
double wkb_validity(const ModelParams& p, double E, double x);

/// Throws RegimeError when wkb_validity(x) exceeds threshold.
WkbReference wkb_basis(const ModelParams& p, double E, double x, double threshold = 1e-8);

/// Smallest x on a 0.25 grid beyond the peaks and turning points where the
/// validity parameter is below threshold.
double auto_match_point(const ModelParams& p, double E, double threshold = 1e-8);

enum class Coordinate { U, X }; ///< u = sinh x (default) or x itself

struct ScatteringOptions {
  Coordinate coordinate = Coordinate::U;
  double x_match = 0.0;          ///< 0 selects auto_match_point
  double validity_threshold = 1e-8;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step_u = 0.25;      ///< cap in u; half a radian of the asymptotic phase
  double unitarity_tol = 1e-6;   ///< larger defects set ScatteringResult::flagged
  double phase_rel_tol = 1e-9;   ///< parity-phase integrations; crossings only need ~1e-6 rad
};

struct ScatteringResult {
  double E = 0.0;
  std::complex<double> r, t;
  double refl_prob = 0.0;
  double trans_prob = 0.0;
  double unitarity_defect = 0.0;
  double x_match = 0.0;
  long steps = 0;
  bool flagged = false;
};

/// Outgoing h+ at +x_match integrated back to -x_match, where the solution is
/// split as h+ + r h- (times 1/t).
ScatteringResult transmission(const ModelParams& p, double E, const ScatteringOptions& opts = {});

/// Unwrapped delta_even - delta_odd of the real parity solutions started at
/// x = 0; |r| = |cos(delta)|. Continuous in E for a fixed x_match.
double phase_difference(const ModelParams& p, double E, double x_match, const ScatteringOptions& opts = {});

struct ScanPoint {
  double E = 0.0;
  double refl_prob = 0.0;
  double phase = 0.0; ///< delta_even - delta_odd
  std::optional<std::string> error;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::vector<double> tt_candidates; ///< refined energies with refl_prob <= 1e-6
  double x_match = 0.0;
};

/// Reflection over the grid from the parity phases. Every crossing of
/// delta = pi/2 (mod pi) between neighbours is refined by bisection and
/// confirmed with transmission(). Points are independent; threads > 1 splits them.
ScanResult reflection_scan(const ModelParams& p, const std::vector<double>& E_grid, const ScatteringOptions& opts = {},
                           unsigned threads = 0);

} // namespace qeslab
