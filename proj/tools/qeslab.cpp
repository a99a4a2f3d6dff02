#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qeslab/cli/commands.hpp"
#include "qeslab/errors.hpp"

using namespace qeslab;

int main(int argc, char** argv) {
  cli::RunConfig cfg;
  std::string format = "human";

  CLI::App app{"Quasi-exactly solvable bottomless potential: spectra, scattering, WKB and Wronskians"};
  app.set_version_flag("--version", std::string("qeslab ") + cli::kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "Output format: human, csv or json")
      ->check(CLI::IsMember({"human", "csv", "json"}));
  app.add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

  auto* t1 = app.add_subcommand("table1", "QES energies for n = 1..nmax");
  t1->add_option("--b", cfg.b, "Coupling b");
  t1->add_option("--nmax", cfg.nmax, "Largest n (<= 12)");

  auto* t2 = app.add_subcommand("table2", "WKB valley levels with errors against the QES levels");
  t2->add_option("--b", cfg.b, "Coupling b");
  t2->add_option("--nmax", cfg.nmax, "Largest n (<= 12)");

  auto* prof = app.add_subcommand("profile", "Potential curve and QES levels with turning points");
  prof->add_option("--b", cfg.b, "Coupling b");
  prof->add_option("--n", cfg.n, "Representation dimension n");
  prof->add_option("--xmin", cfg.xmin);
  prof->add_option("--xmax", cfg.xmax);
  prof->add_option("--samples", cfg.samples);

  auto* scan = app.add_subcommand("scan", "Reflection probability over an energy grid");
  scan->add_option("--b", cfg.b, "Coupling b");
  scan->add_option("--n", cfg.n, "Representation dimension n");
  scan->add_option("--emin", cfg.emin);
  scan->add_option("--emax", cfg.emax);
  scan->add_option("--points", cfg.points);

  auto* wr = app.add_subcommand("wronskian", "Asymptotic Wronskians of the parity states");
  wr->add_option("--b", cfg.b, "Coupling b");
  wr->add_option("--n", cfg.n, "Representation dimension n");
  wr->add_option("--X", cfg.X, "Asymptotic evaluation point");

  auto* crit = app.add_subcommand("critical", "Level-exit and peak-merge couplings");
  crit->add_option("--n", cfg.n, "Representation dimension n");

  auto* kk = app.add_subcommand("kk", "Companion cosh^(2 nu) potential: energy, Wronskian, norms");
  kk->add_option("--a1", cfg.a1, "Depth coefficient A1");
  kk->add_option("--nu", cfg.nu, "Exponent nu");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = cli::parse_format(format);

  if (const char* env = std::getenv("QESLAB_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0) || !(tol < 1.0)) {
      std::cerr << "error: QESLAB_TOL must be a number in (0, 1), got '" << env << "'\n";
      return cli::kUsage;
    }
    cfg.tol = tol;
  }

  try {
    const std::string text = cli::render(cli::dispatch(cfg), cfg.format);
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      file << text;
      if (!file) {
        std::cerr << "error: cannot write " << cfg.out_path << '\n';
        return cli::kRegime;
      }
    }
  } catch (const RealityViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kReality;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kRegime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  return cli::kOk;
}
