#pragma once

#include "fpo/errors.hpp"

namespace fpo {

/// Outcome of a vertical free fall released from rest at height q0.
struct FreeFallResult {
  double alpha;  ///< homogeneity exponent of the potential; 0 marks constant acceleration
  double q0;
  double tau;    ///< time to reach the origin
  double qbar;   ///< time average of the height over the fall
  double kappa;  ///< qbar / q0
};

/// Gamma function for positive real argument (Lanczos approximation with
/// reflection below 1/2). Relative accuracy better than 1e-12 on [0.5, 30].
double gamma_fn(double x);

/// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
double beta_fn(double x, double y);

/// Fall under constant acceleration g: tau = sqrt(2 q0 / g), qbar = (2/3) q0.
FreeFallResult constant_g_fall(double q0, double g);

/// Ratio of average to initial position for the fall in the potential
/// -1/q^alpha, in closed Gamma-function form:
///   kappa(alpha) = G((4+a)/2a) G((1+a)/a) / (G((2+a)/a) G((2+a)/2a)).
double kappa_gamma(double alpha);

/// Same ratio via direct quadrature of the two fall integrals after the
/// substitution q = q0 cos^(2/alpha)(theta). The potential scale mu enters
/// the integrands literally and cancels in the ratio.
double kappa_quadrature(double alpha, double mu = 1.0);

/// Fall time from rest at q0 for the potential -1/(2 q^alpha), i.e. the
/// dynamics qdd = -alpha/(2 q^(alpha+1)):
///   tau = q0^((alpha+2)/2) / alpha * B((2+alpha)/(2 alpha), 1/2).
/// For a potential -k/q^alpha the time rescales by 1/sqrt(2k).
double fall_time(double alpha, double q0);

}  // namespace fpo
