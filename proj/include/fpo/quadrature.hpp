#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fpo/errors.hpp"

namespace fpo {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed at construction by Newton iteration on the Legendre polynomial.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      acc += weights_[i] * f(mid + half * nodes_[i]);
    }
    return acc * half;
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct AdaptiveQuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 64;
  /// Panels touching a singular endpoint are split geometrically down to
  /// this fraction of the original interval instead of chasing the local
  /// error estimate.
  double singular_width_floor = 1e-16;
  bool singular_lo = false;
  bool singular_hi = false;
};

/// Adaptive panel-splitting Gauss-Legendre integration of f over [a, b].
/// Integrable endpoint singularities are admitted through the
/// singular_lo/singular_hi flags. Throws QuadratureError if a regular
/// panel fails to converge within the depth budget.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               const AdaptiveQuadratureOptions& opts = {});

}  // namespace fpo
