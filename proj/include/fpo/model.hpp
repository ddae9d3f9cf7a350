#pragma once

#include "fpo/errors.hpp"

namespace fpo {

/// Positions and velocities of both electrons on the half line.
/// q1 is the outer electron, q2 the inner one; admissible states keep
/// q1 > q2 > 0, with q2 = 0 reached only at the collision endpoint.
struct PhaseState {
  double q1 = 0.0;
  double q2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Time averages of q1 and q2 that enter the mean interaction term.
struct MeanPair {
  double m1 = 0.0;
  double m2 = 0.0;
  double gap() const { return m1 - m2; }
};

/// Interpolation weight between instantaneous (r = 0) and mean (r = 1)
/// electron-electron repulsion.
class HomotopyParam {
 public:
  explicit HomotopyParam(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("homotopy parameter must lie in [0, 1]");
  }
  double value() const { return r_; }

 private:
  double r_;
};

struct AccelPair {
  double a1;
  double a2;
};

/// Accelerations of the two electrons:
///   a1 = -2/q1^2 + r/(m1-m2)^2 + (1-r)/(q1-q2)^2
///   a2 = -2/q2^2 - r/(m1-m2)^2 - (1-r)/(q1-q2)^2
/// a2 < 0 and a1 - a2 > 0 for every admissible input.
AccelPair vector_field(const PhaseState& s, const MeanPair& m, HomotopyParam r);

/// First integral of the interpolated dynamics:
///   E = (v1^2 + v2^2)/2 - 2/q1 - 2/q2 - r (q1-q2)/(m1-m2)^2 + (1-r)/(q1-q2)
double energy(const PhaseState& s, const MeanPair& m, HomotopyParam r);

/// Third derivative of q1:  4 v1/q1^3 - 2(1-r)(v1-v2)/(q1-q2)^3.
double jerk1(const PhaseState& s, HomotopyParam r);

}  // namespace fpo
