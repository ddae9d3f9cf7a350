#include "fpo/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace fpo {

GaussLegendre::GaussLegendre(int n) {
  if (n < 2) throw DomainError("Gauss-Legendre order must be at least 2");
  nodes_.resize(n);
  weights_.resize(n);
  // Roots of P_n by Newton iteration from the Chebyshev-based initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

namespace {

const GaussLegendre& panel_rule() {
  static const GaussLegendre rule(16);
  return rule;
}

struct PanelWorker {
  const std::function<double(double)>& f;
  double tol_per_len;
  double width_floor;
  int max_depth;

  double run(double a, double b, bool sing_lo, bool sing_hi, int depth) const {
    const GaussLegendre& rule = panel_rule();
    const double whole = rule.integrate(f, a, b);
    const double mid = 0.5 * (a + b);
    const double halves = rule.integrate(f, a, mid) + rule.integrate(f, mid, b);
    const double est = std::abs(halves - whole);
    const bool singular = sing_lo || sing_hi;
    if (est <= tol_per_len * (b - a)) return halves;
    if (singular && (b - a) <= width_floor) return halves;
    if (depth >= max_depth) {
      if (singular) return halves;
      throw QuadratureError("adaptive quadrature did not converge within the panel budget");
    }
    return run(a, mid, sing_lo, false, depth + 1) + run(mid, b, false, sing_hi, depth + 1);
  }
};

}  // namespace

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               const AdaptiveQuadratureOptions& opts) {
  if (!(b > a)) throw DomainError("quadrature interval must satisfy a < b");
  PanelWorker worker{f, opts.abs_tol / (b - a), opts.singular_width_floor * (b - a),
                     opts.max_depth};
  return worker.run(a, b, opts.singular_lo, opts.singular_hi, 0);
}

}  // namespace fpo
