#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpo/continuation.hpp"
#include "fpo/orbit_io.hpp"
#include "fpo/solve.hpp"

using namespace fpo;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fpo_io_test_" + name);
}

const SolvedOrbit& golden_orbit() {
  static const SolvedOrbit orb = newton_solve(seed_r1(), HomotopyParam(1.0));
  return orb;
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("orbit round trip is field exact") {
  const SolvedOrbit& orb = golden_orbit();
  const auto path = temp_file("roundtrip.orbit");
  write_orbit(orb, path);
  const SolvedOrbit back = read_orbit(path);

  CHECK(back.r.value() == orb.r.value());
  CHECK(back.unknowns.a1 == orb.unknowns.a1);
  CHECK(back.unknowns.a2 == orb.unknowns.a2);
  CHECK(back.unknowns.m1 == orb.unknowns.m1);
  CHECK(back.unknowns.m2 == orb.unknowns.m2);
  CHECK(back.residual_norm == orb.residual_norm);
  CHECK(back.energy == orb.energy);
  CHECK(back.traj.collision_time() == orb.traj.collision_time());
  CHECK(back.traj.energy_drift() == orb.traj.energy_drift());
  CHECK(back.solver_tol == orb.solver_tol);
  CHECK(back.stats.iterations == orb.stats.iterations);

  REQUIRE(back.traj.samples().size() == orb.traj.samples().size());
  for (std::size_t i = 0; i < orb.traj.samples().size(); ++i) {
    const TrajectorySample& a = orb.traj.samples()[i];
    const TrajectorySample& b = back.traj.samples()[i];
    CHECK(a.t == b.t);
    CHECK(a.state.q1 == b.state.q1);
    CHECK(a.state.q2 == b.state.q2);
    CHECK(a.state.v1 == b.state.v1);
    CHECK(a.state.v2 == b.state.v2);  // includes the -inf collision velocity
    CHECK(a.energy == b.energy);
  }
  std::filesystem::remove(path);
}

TEST_CASE("writes are deterministic apart from the timestamp") {
  std::ostringstream a, b;
  write_orbit(golden_orbit(), a);
  write_orbit(golden_orbit(), b);
  const std::vector<std::string> la = lines_of(a.str());
  const std::vector<std::string> lb = lines_of(b.str());
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (la[i].rfind("timestamp", 0) == 0) continue;
    CHECK(la[i] == lb[i]);
  }
}

TEST_CASE("truncated files are rejected whole") {
  const auto path = temp_file("truncated.orbit");
  write_orbit(golden_orbit(), path);
  const std::string full = read_all(path);
  std::ofstream os(path);
  os << full.substr(0, full.size() / 2);
  os.close();
  CHECK_THROWS_AS(read_orbit(path), SchemaError);
  std::filesystem::remove(path);
}

TEST_CASE("violated file invariants are rejected by name") {
  const auto path = temp_file("tampered.orbit");

  auto write_tampered = [&](const std::string& from, const std::string& to) {
    std::ostringstream os;
    write_orbit(golden_orbit(), os);
    std::string text = os.str();
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    std::ofstream f(path);
    f << text;
  };

  // Reverse the q2 column so it increases.
  {
    std::ostringstream os;
    write_orbit(golden_orbit(), os);
    std::string text = os.str();
    const auto start = text.find("\nq2 ") + 1;
    const auto end = text.find('\n', start);
    std::istringstream row(text.substr(start + 3, end - start - 3));
    std::vector<std::string> vals;
    std::string v;
    while (row >> v) vals.push_back(v);
    std::string reversed = "q2";
    for (auto it = vals.rbegin(); it != vals.rend(); ++it) reversed += " " + *it;
    text.replace(start, end - start, reversed);
    std::ofstream f(path);
    f << text;
  }
  try {
    read_orbit(path);
    FAIL("tampered file accepted");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("q2") != std::string::npos);
  }

  write_tampered("fpo-orbit 1", "fpo-orbit 7");
  CHECK_THROWS_AS(read_orbit(path), SchemaError);

  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_orbit(path), IoError);
}

TEST_CASE("branch round trip") {
  const Branch branch = sweep(1.0, 0.9, 2);
  const auto path = temp_file("branch.fpb");
  write_branch(branch, path);
  const Branch back = read_branch(path);
  CHECK(back.r_from == branch.r_from);
  CHECK(back.r_to == branch.r_to);
  CHECK(back.n_steps == branch.n_steps);
  CHECK(back.stalled == branch.stalled);
  REQUIRE(back.orbits.size() == branch.orbits.size());
  for (std::size_t i = 0; i < branch.orbits.size(); ++i) {
    CHECK(back.orbits[i].r.value() == branch.orbits[i].r.value());
    CHECK(back.orbits[i].unknowns.a1 == branch.orbits[i].unknowns.a1);
    CHECK(back.orbits[i].residual_norm == branch.orbits[i].residual_norm);
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv exports") {
  const SolvedOrbit& orb = golden_orbit();
  const auto traj_path = temp_file("traj.csv");
  export_csv(orb, traj_path, ExportKind::Trajectory);
  const std::vector<std::string> traj_lines = lines_of(read_all(traj_path));
  REQUIRE(!traj_lines.empty());
  CHECK(traj_lines.front() == "t,q1,q2,v1,v2,E");
  CHECK(traj_lines.size() == orb.traj.samples().size() + 1);

  const auto sym_path = temp_file("sym.csv");
  export_csv(orb, sym_path, ExportKind::Symmetric);
  const std::vector<std::string> sym_lines = lines_of(read_all(sym_path));
  CHECK(sym_lines.front() == "t,q1,q2,v1,v2,E");
  const std::string first_q1 = sym_lines[1].substr(sym_lines[1].find(',') + 1);
  const std::string last_q1 = sym_lines.back().substr(sym_lines.back().find(',') + 1);
  CHECK(first_q1.substr(0, first_q1.find(',')) == last_q1.substr(0, last_q1.find(',')));

  const Branch branch = sweep(1.0, 0.9, 2);
  const auto sum_path = temp_file("summary.csv");
  export_csv(branch, sum_path, ExportKind::BranchSummary);
  const std::vector<std::string> sum_lines = lines_of(read_all(sum_path));
  CHECK(sum_lines.front() == "r,a1,a2,m1,m2,Delta,q1_T,energy,min_gap");
  CHECK(sum_lines.size() == branch.orbits.size() + 1);

  CHECK_THROWS_AS(export_csv(orb, sum_path, ExportKind::BranchSummary),
                  std::invalid_argument);
  CHECK_THROWS_AS(export_csv(branch, sum_path, ExportKind::Trajectory),
                  std::invalid_argument);

  std::filesystem::remove(traj_path);
  std::filesystem::remove(sym_path);
  std::filesystem::remove(sum_path);
}
