#include "fpo/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <utility>

namespace fpo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const std::array<double, 4>& v, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) return kInf;
    m = std::max(m, std::abs(v[i]));
  }
  return m;
}

/// Row-pivoted Gaussian elimination for the small Newton systems.
std::array<double, 4> solve_linear(std::array<std::array<double, 4>, 4> a,
                                   std::array<double, 4> b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-300) {
      throw NoConvergenceError("singular Jacobian in Newton step");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int row = n - 1; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

struct Eval {
  bool admissible = false;
  std::array<double, 4> f{};
  Trajectory traj;
  double norm = kInf;
};

/// Shared damped-Newton driver for the 4x4 shooting system and the 2x2
/// reductions. The callable either fills an Eval (admissible = false for
/// points outside the decodable region) or throws an integrator error,
/// which the line search treats as an infinitely bad step.
class DampedNewton {
 public:
  using EvalFn = std::function<void(const std::array<double, 4>&, Eval&)>;

  DampedNewton(int n, EvalFn eval, const SolverOptions& opts)
      : n_(n), eval_(std::move(eval)), opts_(opts) {}

  struct Outcome {
    std::array<double, 4> x{};
    Eval eval;
    SolveStats stats;
  };

  Outcome run(std::array<double, 4> x0) {
    SolveStats stats;
    Eval cur;
    eval_(x0, cur);
    ++stats.residual_evals;
    if (!cur.admissible) throw DomainError("inadmissible initial guess");
    std::array<double, 4> x = x0;
    for (int iter = 1; iter <= opts_.max_iter; ++iter) {
      if (cur.norm < opts_.tol) {
        return {x, std::move(cur), stats};
      }
      stats.iterations = iter;
      const auto jac = jacobian(x, cur.f, stats);
      std::array<double, 4> rhs{};
      for (int i = 0; i < n_; ++i) rhs[i] = -cur.f[i];
      std::array<double, 4> dx = solve_linear(jac, rhs, n_);
      // A near-singular Jacobian can propose an arbitrarily long step; the
      // scaled direction still reduces every residual norm to first order,
      // so cap the length instead of letting the line search flounder.
      const double dx_norm = max_abs(dx, n_);
      constexpr double kMaxStep = 0.25;  // log-coordinate trust radius
      if (dx_norm > kMaxStep) {
        for (int i = 0; i < n_; ++i) dx[i] *= kMaxStep / dx_norm;
      }
      line_search(x, cur, dx, stats);
    }
    if (cur.norm < opts_.tol) {
      return {x, std::move(cur), stats};
    }
    throw NoConvergenceError("Newton did not converge within max_iter");
  }

 private:
  std::array<std::array<double, 4>, 4> jacobian(const std::array<double, 4>& x,
                                                const std::array<double, 4>& f0,
                                                SolveStats& stats) {
    std::array<std::optional<std::array<double, 4>>, 4> cols;
    std::array<int, 4> evals_per_col{};
    auto column = [&](int j) -> std::pair<std::optional<std::array<double, 4>>, int> {
      int evals = 0;
      double step = opts_.fd_step;
      for (int attempt = 0; attempt < 3; ++attempt, step /= 16.0) {
        std::array<double, 4> xj = x;
        xj[j] += step;
        Eval ev;
        try {
          eval_(xj, ev);
          ++evals;
        } catch (const DomainError&) {
          continue;
        } catch (const NoCollisionError&) {
          continue;
        }
        if (!ev.admissible || !std::isfinite(ev.norm)) continue;
        std::array<double, 4> col{};
        for (int i = 0; i < n_; ++i) col[i] = (ev.f[i] - f0[i]) / step;
        return {col, evals};
      }
      return {std::nullopt, evals};
    };

    if (opts_.parallel_jacobian) {
      std::array<std::future<std::pair<std::optional<std::array<double, 4>>, int>>, 4> futs;
      for (int j = 0; j < n_; ++j) {
        futs[j] = std::async(std::launch::async, column, j);
      }
      for (int j = 0; j < n_; ++j) {
        auto [col, evals] = futs[j].get();
        cols[j] = col;
        evals_per_col[j] = evals;
      }
    } else {
      for (int j = 0; j < n_; ++j) {
        auto [col, evals] = column(j);
        cols[j] = col;
        evals_per_col[j] = evals;
      }
    }

    std::array<std::array<double, 4>, 4> jac{};
    for (int j = 0; j < n_; ++j) {
      stats.residual_evals += evals_per_col[j];
      if (!cols[j]) throw NoConvergenceError("Jacobian column evaluation failed");
      for (int i = 0; i < n_; ++i) jac[i][j] = (*cols[j])[i];
    }
    return jac;
  }

  void line_search(std::array<double, 4>& x, Eval& cur, const std::array<double, 4>& dx,
                   SolveStats& stats) {
    double alpha = 1.0;
    bool saw_finite = false;
    std::exception_ptr last_error;
    for (int bt = 0; bt <= opts_.max_backtracks; ++bt, alpha *= 0.5) {
      std::array<double, 4> xt = x;
      for (int i = 0; i < n_; ++i) xt[i] += alpha * dx[i];
      Eval trial;
      try {
        eval_(xt, trial);
        ++stats.residual_evals;
      } catch (const DomainError&) {
        last_error = std::current_exception();
        continue;
      } catch (const NoCollisionError&) {
        last_error = std::current_exception();
        continue;
      }
      if (!trial.admissible) continue;
      saw_finite = saw_finite || std::isfinite(trial.norm);
      if (trial.norm < cur.norm) {
        x = xt;
        cur = std::move(trial);
        return;
      }
    }
    if (!saw_finite && last_error) std::rethrow_exception(last_error);
    char msg[96];
    std::snprintf(msg, sizeof(msg), "line search stalled at residual max-norm %.3e",
                  cur.norm);
    throw NoConvergenceError(msg);
  }

  int n_;
  EvalFn eval_;
  SolverOptions opts_;
};

void validate_unknowns(const UnknownVector& u) {
  if (!(u.a2 > 0.0) || !(u.a1 > u.a2)) {
    throw DomainError("unknowns must satisfy a1 > a2 > 0");
  }
  if (!(u.m2 > 0.0) || !(u.m1 > u.m2)) {
    throw DomainError("unknowns must satisfy m1 > m2 > 0");
  }
}

std::pair<ResidualVector, Trajectory> residual_with_traj(const UnknownVector& u,
                                                         HomotopyParam r,
                                                         const IntegratorOptions& opts) {
  validate_unknowns(u);
  Trajectory traj = integrate_to_collision({u.a1, u.a2}, {u.m1, u.m2}, r, opts);
  ResidualVector res;
  res.time_defect = traj.collision_time() - 1.0;
  res.turn_defect = traj.samples().back().state.v1;
  res.mean1_defect = traj.means().m1 - u.m1;
  res.mean2_defect = traj.means().m2 - u.m2;
  return {res, std::move(traj)};
}

std::array<double, 4> to_log(const UnknownVector& u) {
  return {std::log(u.a1), std::log(u.a1 - u.a2), std::log(u.m1), std::log(u.m1 - u.m2)};
}

bool from_log(const std::array<double, 4>& x, UnknownVector& u) {
  for (int i = 0; i < 4; ++i) {
    if (!(x[i] < 700.0)) return false;
  }
  u.a1 = std::exp(x[0]);
  u.a2 = u.a1 - std::exp(x[1]);
  u.m1 = std::exp(x[2]);
  u.m2 = u.m1 - std::exp(x[3]);
  return u.a2 > 0.0 && u.m2 > 0.0;
}

SolvedOrbit make_orbit(HomotopyParam r, const UnknownVector& u, Eval&& ev,
                       const SolveStats& stats, const SolverOptions& opts) {
  SolvedOrbit orb{r,
                  u,
                  std::move(ev.traj),
                  ev.norm,
                  0.0,
                  stats,
                  opts.tol,
                  opts.integrator};
  orb.energy = orb.traj.samples().front().energy;
  return orb;
}

SolvedOrbit newton4_solve(const UnknownVector& u0, HomotopyParam r,
                          const SolverOptions& opts) {
  DampedNewton::EvalFn eval = [&](const std::array<double, 4>& x, Eval& out) {
    UnknownVector u;
    if (!from_log(x, u)) return;
    auto [res, traj] = residual_with_traj(u, r, opts.integrator);
    out.admissible = true;
    out.f = res.as_array();
    out.traj = std::move(traj);
    out.norm = res.max_norm();
  };
  DampedNewton newton(4, eval, opts);
  auto outcome = newton.run(to_log(u0));
  UnknownVector u;
  from_log(outcome.x, u);
  return make_orbit(r, u, std::move(outcome.eval), outcome.stats, opts);
}

/// Inner 2x2 shoot in (a1, a2) with the means held fixed: drives the
/// collision-time and turning defects to zero.
DampedNewton::Outcome shoot_heights(const UnknownVector& seed, const MeanPair& means,
                                    HomotopyParam r, const SolverOptions& opts) {
  DampedNewton::EvalFn eval = [&](const std::array<double, 4>& x, Eval& out) {
    if (!(x[0] < 700.0) || !(x[1] < 700.0)) return;
    const double a1 = std::exp(x[0]);
    const double a2 = a1 - std::exp(x[1]);
    if (!(a2 > 0.0)) return;
    auto [res, traj] =
        residual_with_traj({a1, a2, means.m1, means.m2}, r, opts.integrator);
    out.admissible = true;
    out.f = {res.time_defect, res.turn_defect, 0.0, 0.0};
    out.traj = std::move(traj);
    out.norm = max_abs(out.f, 2);
  };
  DampedNewton newton(2, eval, opts);
  return newton.run({std::log(seed.a1), std::log(seed.a1 - seed.a2), 0.0, 0.0});
}

SolvedOrbit nested_means_solve(const UnknownVector& u0, HomotopyParam r,
                               const SolverOptions& opts) {
  UnknownVector u = u0;
  SolveStats total;
  // The map m -> observed means is expansive near r = 1 (its gain on the
  // mean gap approaches sqrt(2)), so the plain update diverges there; a
  // window-1 Anderson (secant) step on the fixed-point residual converges
  // across the whole homotopy range.
  bool have_prev = false;
  double gp1 = 0.0, gp2 = 0.0, mp1 = 0.0, mp2 = 0.0;
  for (int outer = 1; outer <= opts.max_iter; ++outer) {
    auto inner = shoot_heights(u, {u.m1, u.m2}, r, opts);
    total.iterations = outer;
    total.residual_evals += inner.stats.residual_evals;
    u.a1 = std::exp(inner.x[0]);
    u.a2 = u.a1 - std::exp(inner.x[1]);
    const MeanPair observed = inner.eval.traj.means();
    ResidualVector res;
    res.time_defect = inner.eval.f[0];
    res.turn_defect = inner.eval.f[1];
    res.mean1_defect = observed.m1 - u.m1;
    res.mean2_defect = observed.m2 - u.m2;
    if (res.max_norm() < opts.tol) {
      Eval ev;
      ev.admissible = true;
      ev.f = res.as_array();
      ev.traj = std::move(inner.eval.traj);
      ev.norm = res.max_norm();
      return make_orbit(r, u, std::move(ev), total, opts);
    }
    const double g1 = res.mean1_defect;
    const double g2 = res.mean2_defect;
    double next_m1 = observed.m1;
    double next_m2 = observed.m2;
    if (have_prev) {
      const double d1 = g1 - gp1, d2 = g2 - gp2;
      const double denom = d1 * d1 + d2 * d2;
      if (denom > 0.0) {
        const double gamma = (g1 * d1 + g2 * d2) / denom;
        next_m1 = observed.m1 - gamma * (observed.m1 - mp1);
        next_m2 = observed.m2 - gamma * (observed.m2 - mp2);
      }
    }
    gp1 = g1;
    gp2 = g2;
    mp1 = observed.m1;
    mp2 = observed.m2;
    have_prev = true;
    if (!(next_m2 > 0.0) || !(next_m1 > next_m2)) {
      next_m1 = observed.m1;
      next_m2 = observed.m2;
    }
    // Large mean jumps push the inner shoot outside its Newton basin;
    // cap the per-iteration move instead.
    const auto clamp_step = [](double proposed, double current) {
      return std::clamp(proposed, 0.95 * current, 1.05 * current);
    };
    u.m1 = clamp_step(next_m1, u.m1);
    u.m2 = clamp_step(next_m2, u.m2);
  }
  throw NoConvergenceError("mean-field fixed point did not converge within max_iter");
}

}  // namespace

double ResidualVector::max_norm() const { return max_abs(as_array(), 4); }

ResidualVector residual(const UnknownVector& u, HomotopyParam r,
                        const IntegratorOptions& opts) {
  return residual_with_traj(u, r, opts).first;
}

SolvedOrbit newton_solve(const UnknownVector& u0, HomotopyParam r,
                         const SolverOptions& opts) {
  validate_unknowns(u0);
  switch (opts.strategy) {
    case SolveStrategy::NestedMeans:
      return nested_means_solve(u0, r, opts);
    case SolveStrategy::Newton4:
    default:
      return newton4_solve(u0, r, opts);
  }
}

UnknownVector seed_r1(const SolverOptions& opts) {
  const double ratio = 1.0 - 1.0 / std::sqrt(2.0);
  DampedNewton::EvalFn eval = [&](const std::array<double, 4>& x, Eval& out) {
    if (!(x[0] < 700.0) || !(x[1] < 700.0)) return;
    const double a1 = std::exp(x[0]);
    const double a2 = std::exp(x[1]);
    if (!(a2 < a1)) return;
    // Constancy of q1 pins the means, so only (a1, a2) shoot: match the
    // collision time and the inner mean to the reduction's targets.
    auto [res, traj] =
        residual_with_traj({a1, a2, a1, ratio * a1}, HomotopyParam(1.0), opts.integrator);
    out.admissible = true;
    out.f = {res.time_defect, res.mean2_defect, 0.0, 0.0};
    out.traj = std::move(traj);
    out.norm = max_abs(out.f, 2);
  };
  DampedNewton newton(2, eval, opts);
  const auto outcome = newton.run({std::log(3.0), std::log(1.25), 0.0, 0.0});
  const double a1 = std::exp(outcome.x[0]);
  const double a2 = std::exp(outcome.x[1]);
  return {a1, a2, a1, ratio * a1};
}

PeriodicOrbit extend_symmetric(const SolvedOrbit& orb) {
  const auto& half = orb.traj.samples();
  PeriodicOrbit out;
  out.period = 2.0 * orb.traj.collision_time();
  out.means = orb.traj.means();
  out.samples = half;
  out.samples.reserve(2 * half.size() - 1);
  for (std::size_t i = half.size() - 1; i-- > 0;) {
    const TrajectorySample& s = half[i];
    out.samples.push_back({out.period - s.t,
                           PhaseState{s.state.q1, s.state.q2, -s.state.v1, -s.state.v2},
                           s.energy});
  }
  return out;
}

}  // namespace fpo
