#include "fpo/continuation.hpp"

#include <cmath>
#include <sstream>

namespace fpo {

UnknownVector predict(const std::vector<std::pair<double, UnknownVector>>& history,
                      double r_next) {
  if (history.empty()) throw DomainError("predict requires at least one branch member");
  const auto& [r1, u1] = history.back();
  if (history.size() == 1) return u1;
  const auto& [r0, u0] = history[history.size() - 2];
  if (r1 == r0) return u1;
  const double w = (r_next - r1) / (r1 - r0);
  return {u1.a1 + w * (u1.a1 - u0.a1), u1.a2 + w * (u1.a2 - u0.a2),
          u1.m1 + w * (u1.m1 - u0.m1), u1.m2 + w * (u1.m2 - u0.m2)};
}

namespace {

bool admissible(const UnknownVector& u) {
  return u.a2 > 0.0 && u.a1 > u.a2 && u.m2 > 0.0 && u.m1 > u.m2;
}

std::string describe(const std::exception& e, double r) {
  std::ostringstream os;
  os.precision(17);
  os << "corrector failed at r = " << r << ": " << e.what();
  return os.str();
}

}  // namespace

Branch sweep(double r_from, double r_to, int n_steps, const SweepOptions& opts) {
  if (n_steps < 1) throw std::invalid_argument("sweep requires n_steps >= 1");
  HomotopyParam{r_from};
  HomotopyParam{r_to};

  Branch branch;
  branch.r_from = r_from;
  branch.r_to = r_to;
  branch.n_steps = n_steps;
  std::vector<std::pair<double, UnknownVector>> history;

  // First point: the analytic reduction seeds r = 1, everything else
  // needs a caller-provided seed.
  UnknownVector seed0;
  if (opts.seed) {
    seed0 = *opts.seed;
  } else if (r_from == 1.0) {
    seed0 = seed_r1(opts.solver);
  } else {
    throw std::invalid_argument("sweep away from r = 1 requires a seed");
  }
  branch.orbits.push_back(newton_solve(seed0, HomotopyParam(r_from), opts.solver));
  history.emplace_back(r_from, branch.orbits.back().unknowns);

  if (r_from == r_to) return branch;

  const double grid_step = (r_to - r_from) / n_steps;
  for (int k = 1; k <= n_steps; ++k) {
    const double r_goal = k == n_steps ? r_to : r_from + k * grid_step;
    // Walk toward this grid point, halving on corrector failure.
    while (history.back().first != r_goal) {
      const double r_base = history.back().first;
      double r_try = r_goal;
      int halvings = 0;
      for (;;) {
        UnknownVector guess = predict(history, r_try);
        if (!admissible(guess)) guess = history.back().second;
        try {
          branch.orbits.push_back(newton_solve(guess, HomotopyParam(r_try), opts.solver));
          history.emplace_back(r_try, branch.orbits.back().unknowns);
          break;
        } catch (const NoConvergenceError& e) {
          branch.failures.push_back(describe(e, r_try));
        } catch (const NoCollisionError& e) {
          branch.failures.push_back(describe(e, r_try));
        } catch (const DomainError& e) {
          branch.failures.push_back(describe(e, r_try));
        }
        ++halvings;
        r_try = 0.5 * (r_base + r_try);
        if (halvings > opts.max_halvings || std::abs(r_try - r_base) < opts.min_r_step) {
          branch.stalled = true;
          branch.stall_r = r_goal;
          std::ostringstream os;
          os.precision(17);
          os << "branch stalled before r = " << r_goal << " (last good r = " << r_base
             << ", " << halvings << " halvings)";
          branch.failures.push_back(os.str());
          return branch;
        }
      }
    }
  }
  return branch;
}

}  // namespace fpo
