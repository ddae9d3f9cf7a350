#pragma once

#include <string>
#include <vector>

#include "fpo/solve.hpp"

namespace fpo {

/// The explicit constant chain behind the compactness bound.
struct ConstantsLedger {
  double eps = 0.0;    ///< mean-contraction constant, in (0, 1)
  double c0 = 0.0;     ///< 260 + 3/(2 eps^2)
  double c1 = 0.0;     ///< 1/(3 (c0+2)^2), gap bound factor for r < 1
  double c2 = 0.0;     ///< min(c1/145, 1/30), uniform gap bound
  double c3 = 0.0;     ///< 2 + 1/(2 c2^2), bound on q2(0)
  double c4 = 0.0;     ///< (c3+1)/(sqrt(2)-1), bound on q1(T)
  double kappa = 0.0;  ///< max(c4, 1/c2)
};

/// Default eps = 1 - pi/4, the mean-fall ratio of the pure -1/q^2 potential.
double default_eps();

ConstantsLedger compute_constants(double eps);

/// f(r) = sqrt(1+r) / (sqrt(1+r) - sqrt(r)); monotone increasing on [0, 1].
double f_ratio(HomotopyParam r);

struct BoundCheck {
  std::string name;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs, oriented so pass means margin >= -tol
  bool strict = false;  ///< sign conditions checked with zero slack
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  double report_tol = 0.0;
  double eps_configured = 0.0;
  /// Largest eps the orbit itself admits in mean2 <= (1-eps) q2(0).
  double eps_empirical = 0.0;

  bool all_pass() const;
  const BoundCheck* find(const std::string& name) const;
};

/// Smallest q1 - q2 over the orbit, refined off the sample grid by
/// golden-section search on the dense output.
double refined_min_gap(const Trajectory& traj);

/// Audits one solved orbit against the full inequality chain and the
/// compactness bound; failures become report entries, never throws.
BoundReport verify_orbit(const SolvedOrbit& orb, const ConstantsLedger& ledger,
                         double report_tol = 1e-8);

}  // namespace fpo
