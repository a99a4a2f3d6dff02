#pragma once

#include <optional>
#include <vector>

#include "qeslab/potential.hpp"

namespace qeslab {

/// int sqrt(E - V) dx between the valley turning points. Throws DomainError
/// unless in_valley(p, E).
double action_integral(const ModelParams& p, double E);

/// Peak-to-peak action at E = v_peak, the supremum of action_integral.
double valley_action_max(const ModelParams& p);

struct WkbLevel {
  int m = 1;
  double E = 0.0;
  double action = 0.0; ///< (m - 1/2) pi
  std::optional<double> percent_error_vs_qes;
};

/// Solutions of action(E) = (m - 1/2) pi inside the valley, m = 1, 2, ...
/// Level m is compared with the m-th QES energy when n >= m.
std::vector<WkbLevel> wkb_levels(const ModelParams& p);

/// Largest m with (m - 1/2) pi <= pi sqrt(n^2 - 1/4).
int small_b_capacity(int n);

/// Coupling at which QES level `level_index` reaches the barrier top, from a
/// log-spaced sign scan on (1e-4, sqrt(4n^2-1)) and bisection. Throws
/// BracketError when the level never crosses v_peak there.
double critical_b_level_exit(int n, int level_index);

/// sqrt(4 n^2 - 1).
double critical_b_peak_merge(int n);

struct CriticalCouplings {
  int n = 1;
  std::vector<double> level_exit_b; ///< indexed by level, levels that never exit omitted
  std::vector<int> exiting_levels;
  double peak_merge_b = 0.0;
};

CriticalCouplings critical_couplings(int n);

} // namespace qeslab
