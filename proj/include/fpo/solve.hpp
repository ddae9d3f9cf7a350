#pragma once

#include <array>
#include <vector>

#include "fpo/integrate.hpp"
#include "fpo/model.hpp"

namespace fpo {

/// Shooting unknowns: release heights and the self-consistent means.
struct UnknownVector {
  double a1 = 0.0;  ///< q1(0)
  double a2 = 0.0;  ///< q2(0)
  double m1 = 0.0;  ///< mean of q1
  double m2 = 0.0;  ///< mean of q2
};

/// The four defects whose common zero is a solution of the boundary value
/// problem: collision at t = 1, outer turning point at the collision, and
/// self-consistency of both means.
struct ResidualVector {
  double time_defect = 0.0;   ///< T - 1
  double turn_defect = 0.0;   ///< v1(T)
  double mean1_defect = 0.0;  ///< quadrature mean of q1 minus m1
  double mean2_defect = 0.0;  ///< quadrature mean of q2 minus m2

  double max_norm() const;
  std::array<double, 4> as_array() const {
    return {time_defect, turn_defect, mean1_defect, mean2_defect};
  }
};

enum class SolveStrategy {
  Newton4,      ///< damped Newton on the full 4x4 shooting system (default)
  NestedMeans,  ///< fixed point on the means around an inner 2x2 shoot
};

struct SolverOptions {
  double tol = 1e-10;    ///< on the residual max-norm
  int max_iter = 50;
  double fd_step = 1e-6;  ///< forward-difference column step (log coordinates)
  int max_backtracks = 30;
  SolveStrategy strategy = SolveStrategy::Newton4;
  bool parallel_jacobian = true;
  IntegratorOptions integrator{};
};

struct SolveStats {
  int iterations = 0;
  int residual_evals = 0;
};

struct SolvedOrbit {
  HomotopyParam r;
  UnknownVector unknowns;
  Trajectory traj;
  double residual_norm = 0.0;
  double energy = 0.0;  ///< E at t = 0
  SolveStats stats;
  double solver_tol = 0.0;
  IntegratorOptions integrator_opts;
};

/// Integrates the guess and returns the four defects. NoCollision and
/// DomainError from the integrator propagate as guess-rejection signals.
ResidualVector residual(const UnknownVector& u, HomotopyParam r,
                        const IntegratorOptions& opts = {});

/// Damped Newton in the log coordinates (log a1, log(a1-a2), log m1,
/// log(m1-m2)) with a forward-difference Jacobian and a backtracking line
/// search on the residual max-norm.
SolvedOrbit newton_solve(const UnknownVector& u0, HomotopyParam r,
                         const SolverOptions& opts = {});

/// Analytic-reduction seed at r = 1: constancy of q1 forces m1 = a1 and
/// m2 = (1 - 1/sqrt(2)) a1, leaving a 2x2 shoot in (a1, a2) for the
/// collision time and the inner mean.
UnknownVector seed_r1(const SolverOptions& opts = {});

/// The symmetric closed orbit obtained by running the half arc backwards
/// from the collision.
struct PeriodicOrbit {
  std::vector<TrajectorySample> samples;
  double period = 0.0;  ///< 2T
  MeanPair means{};
};

PeriodicOrbit extend_symmetric(const SolvedOrbit& orb);

}  // namespace fpo
