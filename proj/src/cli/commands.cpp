#include "qeslab/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qeslab/errors.hpp"
#include "qeslab/koleykar.hpp"
#include "qeslab/qes_core.hpp"
#include "qeslab/scattering.hpp"
#include "qeslab/semiclassics.hpp"

namespace qeslab::cli {

namespace {

nlohmann::ordered_json base_meta(const std::string& command) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["version"] = kVersion;
  return m;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  // -0.000 prints as 0.000
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

void check_nmax(int nmax) {
  if (nmax < 1 || nmax > 12) throw DomainError("nmax must be in 1..12");
}

} // namespace

std::string format_table1_energy(double E, int n, bool in_valley) {
  std::string s;
  if (n <= 2) {
    s = fixed(E, 1);
    if (s == "0.0") s = "0";
  } else {
    s = fixed(E, 3);
  }
  return in_valley ? "(" + s + ")" : s;
}

std::string format_table2_entry(double E, double percent) {
  char pct[32];
  // Two significant figures: 9.98 -> 10, 1.585 -> 1.6.
  std::snprintf(pct, sizeof pct, "%.2g", percent);
  return fixed(E, 3) + " (" + pct + "%)";
}

Report cmd_table1(double b, int nmax) {
  check_nmax(nmax);
  Report r;
  r.command = "table1";
  r.meta = base_meta("table1");
  r.meta["b"] = b;
  r.meta["nmax"] = nmax;

  Table machine{"table1", {"n", "level", "energy", "in_valley"}, {}};
  Table human{"QES energies (valley levels in parentheses)", {"n"}, {}};
  for (int k = 1; k <= nmax; ++k) human.columns.push_back("E" + std::to_string(k));
  for (int n = 1; n <= nmax; ++n) {
    const ModelParams p{b, n};
    const ShapeReport shape = shape_report(p);
    std::vector<Cell> line{Cell(n)};
    for (const QesState& s : qes_spectrum(p)) {
      const bool valley = in_valley(shape, s.energy);
      machine.rows.push_back({Cell(n), Cell(s.level_index), Cell(s.energy), Cell(valley)});
      line.push_back(Cell::shown(s.energy, format_table1_energy(s.energy, n, valley)));
    }
    human.rows.push_back(std::move(line));
  }
  r.tables.push_back(std::move(machine));
  r.human_tables.push_back(std::move(human));
  return r;
}

Report cmd_table2(double b, int nmax) {
  check_nmax(nmax);
  Report r;
  r.command = "table2";
  r.meta = base_meta("table2");
  r.meta["b"] = b;
  r.meta["nmax"] = nmax;

  Table machine{"table2", {"n", "m", "energy_wkb", "energy_qes", "percent_error"}, {}};
  Table human{"WKB valley levels (percentage error against the QES level)", {"n", "E1", "E2", "E3"}, {}};
  std::size_t widest = 3;
  for (int n = 1; n <= nmax; ++n) {
    const ModelParams p{b, n};
    const auto levels = wkb_levels(p);
    if (levels.empty()) continue;
    const auto qes = qes_spectrum(p);
    std::vector<Cell> line{Cell(n)};
    for (const WkbLevel& l : levels) {
      Cell exact, pct;
      if (l.m <= n) exact = Cell(qes[static_cast<std::size_t>(l.m - 1)].energy);
      if (l.percent_error_vs_qes) pct = Cell(*l.percent_error_vs_qes);
      machine.rows.push_back({Cell(n), Cell(l.m), Cell(l.E), exact, pct});
      const std::string text = l.percent_error_vs_qes ? format_table2_entry(l.E, *l.percent_error_vs_qes) : fixed(l.E, 3);
      line.push_back(Cell::shown(l.E, text));
    }
    widest = std::max(widest, line.size() - 1);
    human.rows.push_back(std::move(line));
  }
  for (std::size_t k = 4; k <= widest; ++k) human.columns.push_back("E" + std::to_string(k));
  r.tables.push_back(std::move(machine));
  r.human_tables.push_back(std::move(human));
  return r;
}

Report cmd_profile(double b, int n, double xmin, double xmax, int samples) {
  if (samples < 2) throw DomainError("profile: samples must be >= 2");
  if (!(xmin < xmax)) throw DomainError("profile: need xmin < xmax");
  const ModelParams p{b, n};
  p.validate();
  Report r;
  r.command = "profile";
  r.meta = base_meta("profile");
  r.meta["b"] = b;
  r.meta["n"] = n;
  r.meta["xmin"] = xmin;
  r.meta["xmax"] = xmax;
  r.meta["samples"] = samples;

  Table curve{"potential", {"x", "V"}, {}};
  for (int i = 0; i < samples; ++i) {
    // Symmetric sample placement so a symmetric range gives an exactly mirrored column.
    const double t = static_cast<double>(i) / (samples - 1);
    const double x = i == samples - 1 ? xmax : xmin + (xmax - xmin) * t;
    curve.rows.push_back({Cell(x), Cell(eval_potential(p, x))});
  }
  Table levels{"levels", {"level", "energy", "in_valley", "turning_points", "tp1", "tp2", "tp3", "tp4"}, {}};
  const ShapeReport shape = shape_report(p);
  for (const QesState& s : qes_spectrum(p)) {
    const TurningPoints tp = turning_points(p, s.energy);
    std::vector<Cell> row{Cell(s.level_index), Cell(s.energy), Cell(in_valley(shape, s.energy)),
                          Cell(static_cast<int>(tp.points.size()))};
    for (std::size_t k = 0; k < 4; ++k) row.push_back(k < tp.points.size() ? Cell(tp.points[k]) : Cell());
    levels.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(curve));
  r.tables.push_back(std::move(levels));
  return r;
}

Report cmd_scan(double b, int n, double emin, double emax, int points, std::optional<double> tol) {
  if (points < 2) throw DomainError("scan: points must be >= 2");
  if (!(emin < emax)) throw DomainError("scan: need emin < emax");
  const ModelParams p{b, n};
  ScatteringOptions opts;
  if (tol) {
    opts.rel_tol = *tol;
    opts.phase_rel_tol = *tol;
  }
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(emin + (emax - emin) * i / (points - 1));
  const ScanResult scan = reflection_scan(p, grid, opts);

  Report r;
  r.command = "scan";
  r.meta = base_meta("scan");
  r.meta["b"] = b;
  r.meta["n"] = n;
  r.meta["emin"] = emin;
  r.meta["emax"] = emax;
  r.meta["points"] = points;
  r.meta["x_match"] = scan.x_match;
  r.meta["rel_tol"] = opts.rel_tol;
  r.meta["phase_rel_tol"] = opts.phase_rel_tol;

  Table rows{"scan", {"energy", "refl_prob", "phase_difference", "error"}, {}};
  for (const ScanPoint& pt : scan.points)
    rows.rows.push_back({Cell(pt.E), Cell(pt.refl_prob), Cell(pt.phase), pt.error ? Cell(*pt.error) : Cell()});
  Table tt{"tt_candidates", {"energy"}, {}};
  for (double E : scan.tt_candidates) tt.rows.push_back({Cell(E)});
  r.tables.push_back(std::move(rows));
  r.tables.push_back(std::move(tt));
  return r;
}

Report cmd_wronskian(double b, int n, double X) {
  const ModelParams p{b, n};
  std::vector<ParityState> states;
  for (const QesState& s : qes_spectrum(p)) {
    auto [even, odd] = parity_combine(s);
    states.push_back(even);
    states.push_back(odd);
  }
  const auto reports = self_adjoint_check(states, X);
  Report r;
  r.command = "wronskian";
  r.meta = base_meta("wronskian");
  r.meta["b"] = b;
  r.meta["n"] = n;
  r.meta["X"] = X;
  Table t{"wronskian",
          {"first", "second", "w_plus_re", "w_plus_im", "w_minus_re", "w_minus_im", "difference_abs"},
          {}};
  double worst = 0.0;
  for (const auto& w : reports) {
    t.rows.push_back({Cell(w.pair.first), Cell(w.pair.second), Cell(w.w_plus.real()), Cell(w.w_plus.imag()),
                      Cell(w.w_minus.real()), Cell(w.w_minus.imag()), Cell(std::abs(w.difference))});
    worst = std::max(worst, std::abs(w.difference));
  }
  r.meta["max_boundary_difference"] = worst;
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_critical(int n) {
  const CriticalCouplings c = critical_couplings(n);
  Report r;
  r.command = "critical";
  r.meta = base_meta("critical");
  r.meta["n"] = n;
  Table t{"critical", {"kind", "level", "b"}, {}};
  for (std::size_t k = 0; k < c.level_exit_b.size(); ++k)
    t.rows.push_back({Cell("level_exit"), Cell(c.exiting_levels[k]), Cell(c.level_exit_b[k])});
  t.rows.push_back({Cell("peak_merge"), Cell(), Cell(c.peak_merge_b)});
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_kk(double a1, double nu, std::optional<double> tol) {
  const KKParams p{a1, nu};
  const KKStates s(p);
  const double E = kk_energy(p);
  const KKWronskian w = kk_wronskian(p);
  double residual = 0.0;
  const double span = std::min(6.0, s.safe_window());
  for (int i = -120; i <= 120; ++i) {
    const double x = span * i / 120.0;
    residual = std::max({residual, s.residual(1, E, x), s.residual(2, E, x)});
  }
  const double qtol = tol.value_or(1e-8);
  const auto n1 = s.norm_squared(1, qtol);
  const auto n2 = s.norm_squared(2, qtol);

  Report r;
  r.command = "kk";
  r.meta = base_meta("kk");
  r.meta["A1"] = a1;
  r.meta["nu"] = nu;
  r.meta["quadrature_tol"] = qtol;
  Table t{"kk",
          {"energy", "wronskian", "max_residual", "norm1", "norm1_error", "norm2", "norm2_error", "safe_window"},
          {}};
  t.rows.push_back({Cell(E), Cell(w.value), Cell(residual), Cell(n1.value), Cell(n1.error_estimate), Cell(n2.value),
                    Cell(n2.error_estimate), Cell(s.safe_window())});
  r.tables.push_back(std::move(t));
  return r;
}

Report dispatch(const RunConfig& cfg) {
  Report r;
  if (cfg.command == "table1") r = cmd_table1(cfg.b, cfg.nmax);
  else if (cfg.command == "table2") r = cmd_table2(cfg.b, cfg.nmax);
  else if (cfg.command == "profile") r = cmd_profile(cfg.b, cfg.n, cfg.xmin, cfg.xmax, cfg.samples);
  else if (cfg.command == "scan") r = cmd_scan(cfg.b, cfg.n, cfg.emin, cfg.emax, cfg.points, cfg.tol);
  else if (cfg.command == "wronskian") r = cmd_wronskian(cfg.b, cfg.n, cfg.X);
  else if (cfg.command == "critical") r = cmd_critical(cfg.n);
  else if (cfg.command == "kk") r = cmd_kk(cfg.a1, cfg.nu, cfg.tol);
  else throw DomainError("unknown command '" + cfg.command + "'");
  if (cfg.tol) r.meta["QESLAB_TOL"] = *cfg.tol;
  return r;
}

} // namespace qeslab::cli
