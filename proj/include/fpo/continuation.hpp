#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpo/solve.hpp"

namespace fpo {

/// Family of solved orbits along the homotopy, in sweep order with
/// strictly monotone r. On a stall the branch built so far is returned
/// with diagnostics in `failures`.
struct Branch {
  std::vector<SolvedOrbit> orbits;
  std::vector<std::string> failures;
  bool stalled = false;
  double stall_r = 0.0;  ///< first grid value that could not be reached
  // Sweep configuration, kept for persistence.
  double r_from = 0.0;
  double r_to = 0.0;
  int n_steps = 0;
};

struct SweepOptions {
  SolverOptions solver{};
  /// Seed for the first solve; required unless the sweep starts at r = 1,
  /// where the analytic reduction provides one.
  std::optional<UnknownVector> seed;
  double min_r_step = 1e-6;
  int max_halvings = 10;
};

/// Secant extrapolation of the unknowns from the last (<= 2) converged
/// members; with a single member the unknowns are copied.
UnknownVector predict(const std::vector<std::pair<double, UnknownVector>>& history,
                      double r_next);

/// Marches from r_from to r_to over n_steps uniform grid points with a
/// predictor + Newton corrector, halving the r-step on corrector failure.
Branch sweep(double r_from, double r_to, int n_steps, const SweepOptions& opts = {});

}  // namespace fpo
