#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fpo/model.hpp"

namespace fpo {

/// Starting heights of the two electrons; both are released from rest.
struct InitialData {
  double a1 = 0.0;  ///< q1(0)
  double a2 = 0.0;  ///< q2(0)
};

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  /// Below this q2 the integration switches to the regularized collision
  /// chart. In the physical chart the accelerations grow like 2/q2^2, so
  /// double rounding accumulates a tolerance-independent energy defect of
  /// order eps/q2 there; 1e-2 keeps that floor near 1e-13 and leaves the
  /// steep part of the fall to the chart whose variables stay O(1).
  double collision_threshold = 1e-2;
  /// Give up with NoCollisionError past this physical time.
  double time_horizon = 10.0;
  /// Root tolerance on the transformed collision variable.
  double event_tol = 1e-12;
};

struct TrajectorySample {
  double t = 0.0;
  PhaseState state;
  double energy = 0.0;
};

namespace detail {

/// Dense-output coefficients of one accepted step, in the chart it was
/// taken in. Physical chart components: q1, q2, v1, v2, Q1, Q2, h over t.
/// Regularized chart components: q1, v1, xi, eta, h, t, Q1, Q2 over s,
/// where q2 = xi^2, v2 = 2 eta / xi and h = v2^2/2 - 2/q2.
struct DenseSegment {
  bool regularized = false;
  double x0 = 0.0;
  double h = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  int dim = 0;
  std::array<std::array<double, 5>, 8> cont{};
};

}  // namespace detail

/// One half arc of a symmetric orbit: release from rest at t = 0, inner
/// electron collision q2 = 0 at t = T. Samples are the accepted integrator
/// steps; between them the trajectory interpolates through the stored
/// dense output (or a Hermite fallback for trajectories parsed from files).
class Trajectory {
 public:
  const std::vector<TrajectorySample>& samples() const { return samples_; }
  double collision_time() const { return T_; }
  MeanPair means() const { return means_; }
  double energy_drift() const { return energy_drift_; }
  double homotopy_r() const { return r_; }
  /// Mean values the force law was evaluated with (the shooting guess).
  MeanPair force_means() const { return force_means_; }
  bool has_dense_output() const { return !segments_.empty(); }

  PhaseState state_at(double t) const;
  double energy_at(double t) const;

  /// Rebuild a trajectory from bare samples, e.g. parsed from an orbit file.
  static Trajectory from_samples(std::vector<TrajectorySample> samples, double T,
                                 MeanPair means, double energy_drift, double r,
                                 MeanPair force_means);

 private:
  friend class CollisionIntegrator;
  friend Trajectory resample_uniform(const Trajectory&, std::size_t);

  std::vector<TrajectorySample> samples_;
  std::vector<detail::DenseSegment> segments_;
  double T_ = 0.0;
  MeanPair means_{};
  MeanPair force_means_{};
  double energy_drift_ = 0.0;
  double r_ = 0.0;
};

/// Integrates the interpolated dynamics from rest at (a1, a2) until the
/// first collision q2 = 0. The Kepler-type singularity is traversed in a
/// time-reparametrized chart (dt = q2 ds) with a square-root coordinate,
/// so the reported endpoint has finite data except for v2, which diverges
/// and is recorded as -infinity.
Trajectory integrate_to_collision(const InitialData& init, const MeanPair& means,
                                  HomotopyParam r, const IntegratorOptions& opts = {});

/// Quadrature means (1/T) int_0^T q_i dt. The integrals are carried as
/// extra states of the integration, so they inherit the step tolerances.
MeanPair trajectory_means(const Trajectory& traj);

/// n samples at uniform t in [0, T] through the dense output. Dense
/// segments are shared with the source, so means and interpolation are
/// unchanged.
Trajectory resample_uniform(const Trajectory& traj, std::size_t n);

}  // namespace fpo
