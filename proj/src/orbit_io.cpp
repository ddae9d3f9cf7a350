#include "fpo/orbit_io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpo/bounds.hpp"

namespace fpo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& is) : is_(is) {}

  std::string word() {
    std::string w;
    if (!(is_ >> w)) throw SchemaError("unexpected end of file");
    return w;
  }

  void expect(const std::string& key) {
    const std::string w = word();
    if (w != key) throw SchemaError("expected '" + key + "', found '" + w + "'");
  }

  double number(const std::string& key) {
    expect(key);
    return raw_number(key);
  }

  double raw_number(const std::string& key) {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end == w.c_str() || *end != '\0') {
      throw SchemaError("malformed number for '" + key + "'");
    }
    return v;
  }

  long integer(const std::string& key) {
    expect(key);
    const std::string w = word();
    char* end = nullptr;
    const long v = std::strtol(w.c_str(), &end, 10);
    if (end == w.c_str() || *end != '\0') {
      throw SchemaError("malformed integer for '" + key + "'");
    }
    return v;
  }

  std::string rest_of_line() {
    std::string line;
    std::getline(is_, line);
    if (!line.empty() && line.front() == ' ') line.erase(0, 1);
    return line;
  }

 private:
  std::istream& is_;
};

void write_orbit_body(const SolvedOrbit& orb, std::ostream& os) {
  const auto& samples = orb.traj.samples();
  os << "fpo-orbit 1\n";
  os << "r " << fmt(orb.r.value()) << "\n";
  os << "a1 " << fmt(orb.unknowns.a1) << "\n";
  os << "a2 " << fmt(orb.unknowns.a2) << "\n";
  os << "m1 " << fmt(orb.unknowns.m1) << "\n";
  os << "m2 " << fmt(orb.unknowns.m2) << "\n";
  os << "residual_norm " << fmt(orb.residual_norm) << "\n";
  os << "energy " << fmt(orb.energy) << "\n";
  os << "T " << fmt(orb.traj.collision_time()) << "\n";
  os << "energy_drift " << fmt(orb.traj.energy_drift()) << "\n";
  os << "solver_tol " << fmt(orb.solver_tol) << "\n";
  os << "rel_tol " << fmt(orb.integrator_opts.rel_tol) << "\n";
  os << "abs_tol " << fmt(orb.integrator_opts.abs_tol) << "\n";
  os << "iterations " << orb.stats.iterations << "\n";
  os << "residual_evals " << orb.stats.residual_evals << "\n";
  os << "timestamp " << utc_timestamp() << "\n";
  os << "samples " << samples.size() << "\n";
  const auto column = [&](const char* key, auto&& get) {
    os << key;
    for (const TrajectorySample& s : samples) os << ' ' << fmt(get(s));
    os << "\n";
  };
  column("t", [](const TrajectorySample& s) { return s.t; });
  column("q1", [](const TrajectorySample& s) { return s.state.q1; });
  column("q2", [](const TrajectorySample& s) { return s.state.q2; });
  column("v1", [](const TrajectorySample& s) { return s.state.v1; });
  column("v2", [](const TrajectorySample& s) { return s.state.v2; });
  column("E", [](const TrajectorySample& s) { return s.energy; });
  os << "end\n";
}

SolvedOrbit read_orbit_body(TokenReader& in) {
  in.expect("fpo-orbit");
  if (in.raw_number("schema version") != 1.0) {
    throw SchemaError("unsupported orbit schema version");
  }
  const double r = in.number("r");
  if (!(r >= 0.0 && r <= 1.0)) throw SchemaError("r outside [0, 1]");
  UnknownVector u;
  u.a1 = in.number("a1");
  u.a2 = in.number("a2");
  u.m1 = in.number("m1");
  u.m2 = in.number("m2");
  if (!(u.a2 > 0.0) || !(u.a1 > u.a2)) throw SchemaError("unknowns violate a1 > a2 > 0");
  if (!(u.m2 > 0.0) || !(u.m1 > u.m2)) throw SchemaError("unknowns violate m1 > m2 > 0");
  const double residual_norm = in.number("residual_norm");
  const double energy0 = in.number("energy");
  const double T = in.number("T");
  const double drift = in.number("energy_drift");
  const double solver_tol = in.number("solver_tol");
  IntegratorOptions iopts;
  iopts.rel_tol = in.number("rel_tol");
  iopts.abs_tol = in.number("abs_tol");
  SolveStats stats;
  stats.iterations = static_cast<int>(in.integer("iterations"));
  stats.residual_evals = static_cast<int>(in.integer("residual_evals"));
  in.expect("timestamp");
  in.word();  // the one field allowed to differ between identical runs
  const long n = in.integer("samples");
  if (n < 2) throw SchemaError("fewer than 2 samples");
  const auto read_column = [&](const char* key) {
    in.expect(key);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (double& v : col) v = in.raw_number(key);
    return col;
  };
  const std::vector<double> t = read_column("t");
  const std::vector<double> q1 = read_column("q1");
  const std::vector<double> q2 = read_column("q2");
  const std::vector<double> v1 = read_column("v1");
  const std::vector<double> v2 = read_column("v2");
  const std::vector<double> e = read_column("E");
  in.expect("end");

  if (t.front() != 0.0) throw SchemaError("t[0] must be 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw SchemaError("t not strictly increasing");
    if (!(q2[i] < q2[i - 1])) throw SchemaError("q2 not strictly decreasing");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(q2[i] >= 0.0)) throw SchemaError("q2 negative");
    if (!(q1[i] > q2[i])) throw SchemaError("electron ordering q1 > q2 violated");
  }
  if (std::abs(t.back() - T) > 1e-12 * std::max(1.0, std::abs(T))) {
    throw SchemaError("T does not match the final sample time");
  }

  std::vector<TrajectorySample> samples(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    samples[i] = {t[i], PhaseState{q1[i], q2[i], v1[i], v2[i]}, e[i]};
  }
  Trajectory traj = Trajectory::from_samples(std::move(samples), T, MeanPair{u.m1, u.m2},
                                             drift, r, MeanPair{u.m1, u.m2});
  SolvedOrbit orb{HomotopyParam(r), u,     std::move(traj), residual_norm,
                  energy0,          stats, solver_tol,      iopts};
  return orb;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

}  // namespace

void write_orbit(const SolvedOrbit& orb, std::ostream& os) { write_orbit_body(orb, os); }

void write_orbit(const SolvedOrbit& orb, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  write_orbit_body(orb, os);
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

SolvedOrbit read_orbit(std::istream& is) {
  TokenReader in(is);
  return read_orbit_body(in);
}

SolvedOrbit read_orbit(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  return read_orbit(is);
}

void write_branch(const Branch& branch, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << "fpo-branch 1\n";
  os << "r_from " << fmt(branch.r_from) << "\n";
  os << "r_to " << fmt(branch.r_to) << "\n";
  os << "steps " << branch.n_steps << "\n";
  os << "stalled " << (branch.stalled ? 1 : 0) << "\n";
  os << "orbits " << branch.orbits.size() << "\n";
  for (const SolvedOrbit& orb : branch.orbits) write_orbit_body(orb, os);
  os << "failures " << branch.failures.size() << "\n";
  for (const std::string& f : branch.failures) os << "failure " << f << "\n";
  os << "end-branch\n";
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

Branch read_branch(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  TokenReader in(is);
  in.expect("fpo-branch");
  if (in.raw_number("schema version") != 1.0) {
    throw SchemaError("unsupported branch schema version");
  }
  Branch branch;
  branch.r_from = in.number("r_from");
  branch.r_to = in.number("r_to");
  branch.n_steps = static_cast<int>(in.integer("steps"));
  branch.stalled = in.integer("stalled") != 0;
  const long n = in.integer("orbits");
  if (n < 1) throw SchemaError("branch holds no orbits");
  branch.orbits.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) branch.orbits.push_back(read_orbit_body(in));
  const bool decreasing = branch.r_to < branch.r_from;
  for (std::size_t i = 1; i < branch.orbits.size(); ++i) {
    const double prev = branch.orbits[i - 1].r.value();
    const double cur = branch.orbits[i].r.value();
    if (decreasing ? !(cur < prev) : !(cur > prev)) {
      throw SchemaError("branch r values not strictly monotone");
    }
  }
  const long k = in.integer("failures");
  for (long i = 0; i < k; ++i) {
    in.expect("failure");
    branch.failures.push_back(in.rest_of_line());
  }
  in.expect("end-branch");
  return branch;
}

namespace {

void write_csv_rows(std::ostream& os, const std::vector<TrajectorySample>& samples) {
  os << "t,q1,q2,v1,v2,E\n";
  for (const TrajectorySample& s : samples) {
    os << fmt(s.t) << ',' << fmt(s.state.q1) << ',' << fmt(s.state.q2) << ','
       << fmt(s.state.v1) << ',' << fmt(s.state.v2) << ',' << fmt(s.energy) << "\n";
  }
}

}  // namespace

void export_csv(const SolvedOrbit& orb, const std::filesystem::path& path, ExportKind kind) {
  std::ofstream os = open_out(path);
  switch (kind) {
    case ExportKind::Trajectory:
      write_csv_rows(os, orb.traj.samples());
      break;
    case ExportKind::Symmetric:
      write_csv_rows(os, extend_symmetric(orb).samples);
      break;
    case ExportKind::BranchSummary:
      throw std::invalid_argument("branch-summary export needs a branch file");
  }
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

void export_csv(const Branch& branch, const std::filesystem::path& path, ExportKind kind) {
  if (kind != ExportKind::BranchSummary) {
    throw std::invalid_argument("trajectory exports need an orbit file");
  }
  std::ofstream os = open_out(path);
  os << "r,a1,a2,m1,m2,Delta,q1_T,energy,min_gap\n";
  for (const SolvedOrbit& orb : branch.orbits) {
    const UnknownVector& u = orb.unknowns;
    os << fmt(orb.r.value()) << ',' << fmt(u.a1) << ',' << fmt(u.a2) << ',' << fmt(u.m1)
       << ',' << fmt(u.m2) << ',' << fmt(u.a1 - u.a2) << ','
       << fmt(orb.traj.samples().back().state.q1) << ',' << fmt(orb.energy) << ','
       << fmt(refined_min_gap(orb.traj)) << "\n";
  }
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace fpo
