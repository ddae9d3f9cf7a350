#include "fpo/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fpo/bounds.hpp"
#include "fpo/continuation.hpp"
#include "fpo/freefall.hpp"
#include "fpo/orbit_io.hpp"
#include "fpo/solve.hpp"

namespace fpo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string peek_magic(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string word;
  is >> word;
  return word;
}

struct SolveArgs {
  double r = 1.0;
  std::string seed_path;
  std::string out_path;
  double tol = 1e-10;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  std::string strategy = "newton";
};

SolverOptions solver_options(const SolveArgs& a) {
  SolverOptions opts;
  opts.tol = a.tol;
  opts.integrator.rel_tol = a.rel_tol;
  opts.integrator.abs_tol = a.abs_tol;
  opts.strategy =
      a.strategy == "nested" ? SolveStrategy::NestedMeans : SolveStrategy::Newton4;
  return opts;
}

int run_solve(const SolveArgs& a) {
  const SolverOptions opts = solver_options(a);
  SolvedOrbit orb = [&] {
    if (!a.seed_path.empty()) {
      return newton_solve(read_orbit(a.seed_path).unknowns, HomotopyParam(a.r), opts);
    }
    if (a.r == 1.0) {
      return newton_solve(seed_r1(opts), HomotopyParam(a.r), opts);
    }
    // No seed away from r = 1: continue down from the analytic seed.
    SweepOptions sopts;
    sopts.solver = opts;
    const int steps = std::max(1, static_cast<int>(std::ceil((1.0 - a.r) / 0.05)));
    Branch branch = sweep(1.0, a.r, steps, sopts);
    if (branch.stalled) throw NoConvergenceError(branch.failures.back());
    return std::move(branch.orbits.back());
  }();
  write_orbit(orb, a.out_path);
  std::cout << "solved r = " << fmt(orb.r.value()) << "  residual = "
            << fmt(orb.residual_norm) << "  T = " << fmt(orb.traj.collision_time())
            << "  -> " << a.out_path << "\n";
  return 0;
}

struct SweepArgs {
  double r_from = 1.0;
  double r_to = 0.0;
  int steps = 20;
  std::string seed_path;
  std::string out_path;
  SolveArgs solver;
};

int run_sweep(const SweepArgs& a) {
  SweepOptions opts;
  opts.solver = solver_options(a.solver);
  if (!a.seed_path.empty()) opts.seed = read_orbit(a.seed_path).unknowns;
  const Branch branch = sweep(a.r_from, a.r_to, a.steps, opts);
  write_branch(branch, a.out_path);
  std::cout << "swept r: " << fmt(a.r_from) << " -> " << fmt(a.r_to) << "  orbits = "
            << branch.orbits.size() << "  -> " << a.out_path << "\n";
  for (const std::string& f : branch.failures) std::cerr << "note: " << f << "\n";
  if (branch.stalled) {
    std::cerr << "branch stalled before r = " << fmt(branch.stall_r) << "\n";
    return 1;
  }
  return 0;
}

void print_report(const SolvedOrbit& orb, const BoundReport& report, std::ostream& os) {
  os << "orbit r = " << fmt(orb.r.value()) << "  residual = " << fmt(orb.residual_norm)
     << "\n";
  for (const BoundCheck& c : report.checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.inequality
       << "  [lhs = " << fmt(c.lhs) << ", rhs = " << fmt(c.rhs) << ", margin = "
       << fmt(c.margin) << "]\n";
  }
  os << "  eps configured = " << fmt(report.eps_configured) << ", empirically admissible = "
     << fmt(report.eps_empirical) << "\n";
}

int run_verify(const std::string& file, double eps, const std::string& report_path,
               double report_tol) {
  const ConstantsLedger ledger = compute_constants(eps);
  std::vector<SolvedOrbit> orbits;
  const std::string magic = peek_magic(file);
  if (magic == "fpo-branch") {
    Branch branch = read_branch(file);
    for (SolvedOrbit& orb : branch.orbits) orbits.push_back(std::move(orb));
  } else if (magic == "fpo-orbit") {
    orbits.push_back(read_orbit(file));
  } else {
    throw SchemaError("unrecognized file magic '" + magic + "'");
  }

  std::ofstream report_file;
  if (!report_path.empty()) {
    report_file.open(report_path);
    if (!report_file) throw IoError("cannot open '" + report_path + "' for writing");
  }

  int failures = 0;
  for (const SolvedOrbit& orb : orbits) {
    const BoundReport report = verify_orbit(orb, ledger, report_tol);
    print_report(orb, report, std::cout);
    if (report_file.is_open()) print_report(orb, report, report_file);
    for (const BoundCheck& c : report.checks) failures += c.pass ? 0 : 1;
  }
  if (failures == 0) {
    std::cout << "all checks passed on " << orbits.size() << " orbit(s)\n";
    return 0;
  }
  std::cerr << failures << " check(s) failed\n";
  return 1;
}

int run_freefall(double alpha, double q0, bool with_quadrature) {
  std::cout << "kappa = " << fmt(kappa_gamma(alpha)) << "\n";
  std::cout << "tau(q0 = " << fmt(q0) << ") = " << fmt(fall_time(alpha, q0)) << "\n";
  if (with_quadrature) {
    std::cout << "kappa_quadrature = " << fmt(kappa_quadrature(alpha)) << "\n";
  }
  return 0;
}

int run_constants(double eps) {
  const ConstantsLedger L = compute_constants(eps);
  std::cout << "eps = " << fmt(L.eps) << "\n";
  std::cout << "c0 = " << fmt(L.c0) << "\n";
  std::cout << "c1 = " << fmt(L.c1) << "\n";
  std::cout << "c2 = " << fmt(L.c2) << "\n";
  std::cout << "c3 = " << fmt(L.c3) << "\n";
  std::cout << "c4 = " << fmt(L.c4) << "\n";
  std::cout << "kappa = " << fmt(L.kappa) << "\n";
  return 0;
}

int run_export(const std::string& file, const std::string& what, const std::string& out) {
  const std::string magic = peek_magic(file);
  if (what == "branch-summary") {
    if (magic != "fpo-branch") {
      throw std::invalid_argument("branch-summary export needs a branch file");
    }
    export_csv(read_branch(file), out, ExportKind::BranchSummary);
  } else {
    if (magic != "fpo-orbit") {
      throw std::invalid_argument("trajectory exports need an orbit file");
    }
    export_csv(read_orbit(file), out,
               what == "symmetric" ? ExportKind::Symmetric : ExportKind::Trajectory);
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"symmetric frozen planet orbits of helium: solve, continue, verify"};
  app.require_subcommand(1);
  int rc = 0;

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve the boundary value problem at one r");
  solve_cmd->add_option("--r", solve_args.r, "homotopy parameter in [0,1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--seed", solve_args.seed_path, "orbit file seeding the Newton solve");
  solve_cmd->add_option("--out", solve_args.out_path, "output orbit file")->required();
  solve_cmd->add_option("--tol", solve_args.tol, "residual max-norm tolerance");
  solve_cmd->add_option("--rel-tol", solve_args.rel_tol, "integrator relative tolerance");
  solve_cmd->add_option("--abs-tol", solve_args.abs_tol, "integrator absolute tolerance");
  solve_cmd->add_option("--strategy", solve_args.strategy, "newton | nested")
      ->check(CLI::IsMember({"newton", "nested"}));
  solve_cmd->callback([&] { rc = run_solve(solve_args); });

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "homotopy continuation over an r range");
  sweep_cmd->add_option("--r-from", sweep_args.r_from, "start of the sweep")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--r-to", sweep_args.r_to, "end of the sweep")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--steps", sweep_args.steps, "number of grid steps")->required();
  sweep_cmd->add_option("--seed", sweep_args.seed_path,
                        "orbit file seeding the first solve (required unless r-from = 1)");
  sweep_cmd->add_option("--out", sweep_args.out_path, "output branch file")->required();
  sweep_cmd->add_option("--tol", sweep_args.solver.tol, "residual max-norm tolerance");
  sweep_cmd->add_option("--rel-tol", sweep_args.solver.rel_tol, "integrator relative tolerance");
  sweep_cmd->add_option("--abs-tol", sweep_args.solver.abs_tol, "integrator absolute tolerance");
  sweep_cmd->callback([&] { rc = run_sweep(sweep_args); });

  std::string verify_file, verify_report;
  double verify_eps = default_eps();
  double verify_tol = 1e-8;
  CLI::App* verify_cmd = app.add_subcommand("verify", "audit orbits against the bound chain");
  verify_cmd->add_option("file", verify_file, "orbit or branch file")->required();
  verify_cmd->add_option("--eps", verify_eps, "mean-contraction constant in (0,1)");
  verify_cmd->add_option("--report", verify_report, "write the full report to this file");
  verify_cmd->add_option("--report-tol", verify_tol, "slack for the inequality checks");
  verify_cmd->callback([&] { rc = run_verify(verify_file, verify_eps, verify_report, verify_tol); });

  double ff_alpha = 1.0, ff_q0 = 1.0;
  bool ff_quad = false;
  CLI::App* ff_cmd = app.add_subcommand("freefall", "mean free-fall ratios and fall times");
  ff_cmd->add_option("--alpha", ff_alpha, "homogeneity exponent of the potential")->required();
  ff_cmd->add_option("--q0", ff_q0, "release height for the fall time");
  ff_cmd->add_flag("--quadrature", ff_quad, "also evaluate the ratio by direct quadrature");
  ff_cmd->callback([&] { rc = run_freefall(ff_alpha, ff_q0, ff_quad); });

  double const_eps = default_eps();
  CLI::App* const_cmd = app.add_subcommand("constants", "print the bound-constant chain");
  const_cmd->add_option("--eps", const_eps, "mean-contraction constant in (0,1)");
  const_cmd->callback([&] { rc = run_constants(const_eps); });

  std::string exp_file, exp_what, exp_out;
  CLI::App* exp_cmd = app.add_subcommand("export", "write plot-ready CSV data");
  exp_cmd->add_option("file", exp_file, "orbit or branch file")->required();
  exp_cmd->add_option("--what", exp_what, "trajectory | symmetric | branch-summary")
      ->required()
      ->check(CLI::IsMember({"trajectory", "symmetric", "branch-summary"}));
  exp_cmd->add_option("--out", exp_out, "output CSV path")->required();
  exp_cmd->callback([&] { rc = run_export(exp_file, exp_what, exp_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace fpo
