#pragma once

#include <optional>
#include <string>

#include "qeslab/cli/report.hpp"
#include "qeslab/states.hpp"

namespace qeslab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  double b = 1.0;
  int n = 2;
  int nmax = 5;
  double xmin = -3.0, xmax = 3.0;
  int samples = 301;
  double emin = -4.0, emax = 1.0;
  int points = 201;
  double X = kAsymptoticX;
  double a1 = 0.25, nu = 1.0;
  std::optional<double> tol; ///< QESLAB_TOL: ODE relative tolerance and quadrature tolerance
  Format format = Format::Human;
  std::string out_path;
};

/// Exit codes of the front end.
enum ExitCode { kOk = 0, kUsage = 2, kRegime = 3, kReality = 4 };

Report cmd_table1(double b, int nmax);
Report cmd_table2(double b, int nmax);
Report cmd_profile(double b, int n, double xmin, double xmax, int samples);
Report cmd_scan(double b, int n, double emin, double emax, int points, std::optional<double> tol = {});
Report cmd_wronskian(double b, int n, double X = kAsymptoticX);
Report cmd_critical(int n);
Report cmd_kk(double a1, double nu, std::optional<double> tol = {});

/// Validates the config and runs its command.
Report dispatch(const RunConfig& cfg);

/// Human formatting of table entries at the printed precision.
std::string format_table1_energy(double E, int n, bool in_valley);
std::string format_table2_entry(double E, double percent);

} // namespace qeslab::cli
