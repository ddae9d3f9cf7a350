#include "fpo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fpo {

double default_eps() { return 1.0 - std::numbers::pi / 4.0; }

ConstantsLedger compute_constants(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  ConstantsLedger L;
  L.eps = eps;
  L.c0 = 260.0 + 3.0 / (2.0 * eps * eps);
  L.c1 = 1.0 / (3.0 * (L.c0 + 2.0) * (L.c0 + 2.0));
  // r <= 144/145 gives gap >= (1-r) c1 >= c1/145; beyond that the mean
  // inequality alone gives 17/10 - 5/3 = 1/30.
  L.c2 = std::min(L.c1 / 145.0, 1.0 / 30.0);
  L.c3 = 2.0 + 1.0 / (2.0 * L.c2 * L.c2);
  L.c4 = (L.c3 + 1.0) / (std::sqrt(2.0) - 1.0);
  L.kappa = std::max(L.c4, 1.0 / L.c2);
  return L;
}

double f_ratio(HomotopyParam r) {
  const double s = std::sqrt(1.0 + r.value());
  return s / (s - std::sqrt(r.value()));
}

bool BoundReport::all_pass() const {
  for (const BoundCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const BoundCheck* BoundReport::find(const std::string& name) const {
  for (const BoundCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double refined_min_gap(const Trajectory& traj) {
  const auto& samples = traj.samples();
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double gap = samples[i].state.q1 - samples[i].state.q2;
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  const double lo = samples[best > 0 ? best - 1 : 0].t;
  const double hi = samples[std::min(best + 1, samples.size() - 1)].t;
  auto gap_at = [&](double t) {
    const PhaseState s = traj.state_at(t);
    return s.q1 - s.q2;
  };
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  for (int i = 0; i < 80 && b - a > 1e-13 * std::max(1.0, hi); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gap_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gap_at(x2);
    }
  }
  return std::min(best_gap, std::min(f1, f2));
}

namespace {

BoundCheck make_check(std::string name, std::string inequality, double lhs, double rhs,
                      bool strict, double tol) {
  BoundCheck c;
  c.name = std::move(name);
  c.inequality = std::move(inequality);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.strict = strict;
  c.pass = strict ? c.margin > 0.0 : c.margin >= -tol;
  return c;
}

}  // namespace

BoundReport verify_orbit(const SolvedOrbit& orb, const ConstantsLedger& ledger,
                         double report_tol) {
  BoundReport report;
  report.report_tol = report_tol;
  report.eps_configured = ledger.eps;

  const auto& samples = orb.traj.samples();
  const double r = orb.r.value();
  const MeanPair means = orb.traj.means();
  const double q2_start = samples.front().state.q2;
  const double q1_end = samples.back().state.q1;
  const double delta = samples.front().state.q1 - q2_start;
  report.eps_empirical = 1.0 - means.m2 / q2_start;

  // (i) inner electron strictly falls
  double worst_q2_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < samples.size(); ++i) {
    worst_q2_increase =
        std::max(worst_q2_increase, samples[i].state.q2 - samples[i - 1].state.q2);
  }
  report.checks.push_back(make_check("q2-decreasing", "q2 strictly decreasing",
                                     worst_q2_increase, 0.0, true, report_tol));

  // (ii) outer electron never retreats; constant when r = 1. Near the
  // turning point the per-step growth of q1 falls below one ulp, so the
  // grid condition is no-decrease with zero slack plus strict growth of
  // the whole arc.
  if (r < 1.0) {
    double worst_q1_decrease = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < samples.size(); ++i) {
      worst_q1_decrease =
          std::max(worst_q1_decrease, samples[i - 1].state.q1 - samples[i].state.q1);
    }
    BoundCheck c = make_check("q1-monotone", "q1 strictly increasing (r < 1)",
                              worst_q1_decrease, 0.0, true, report_tol);
    c.pass = worst_q1_decrease <= 0.0 && q1_end > samples.front().state.q1;
    report.checks.push_back(c);
  } else {
    double max_v1 = 0.0;
    for (const TrajectorySample& s : samples) max_v1 = std::max(max_v1, std::abs(s.state.v1));
    report.checks.push_back(make_check("q1-monotone", "q1 constant (r = 1): max|v1| below tol",
                                       max_v1, report_tol, true, report_tol));
  }

  // (iii) velocity gap opens immediately; the first interior sample still
  // sits on the zero of v1 - v2 at t = 0, so start one sample later.
  double min_vgap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i < samples.size(); ++i) {
    min_vgap = std::min(min_vgap, samples[i].state.v1 - samples[i].state.v2);
  }
  report.checks.push_back(
      make_check("velocity-gap-positive", "v1 - v2 > 0 for t > 0", 0.0, min_vgap, true,
                 report_tol));

  // (iv) release height of the inner electron
  report.checks.push_back(
      make_check("inner-start-lower-bound", "q2(0) >= 1", 1.0, q2_start, false, report_tol));

  // (v) gap never shrinks below its initial value
  const double min_gap = refined_min_gap(orb.traj);
  report.checks.push_back(make_check("gap-above-initial-gap", "q1(t) - q2(t) >= Delta",
                                     delta, min_gap, false, report_tol));

  // (vi) homotopy-weighted gap bound
  report.checks.push_back(make_check("gap-homotopy-lower-bound", "Delta >= (1-r) c1",
                                     (1.0 - r) * ledger.c1, delta, false, report_tol));

  // (vii) uniform gap bound
  report.checks.push_back(
      make_check("gap-uniform-lower-bound", "Delta >= c2", ledger.c2, delta, false,
                 report_tol));

  // (viii) mean-value inequality; the bound is mean1 / f(r)
  report.checks.push_back(make_check("mean-ratio-bound",
                                     "mean2 <= (1 - sqrt(r/(1+r))) mean1", means.m2,
                                     means.m1 / f_ratio(orb.r), false, report_tol));

  // (ix) upper bound on the release height
  report.checks.push_back(
      make_check("inner-start-upper-bound", "q2(0) <= c3", q2_start, ledger.c3, false,
                 report_tol));

  // (x) upper bound on the outer electron at the collision
  report.checks.push_back(
      make_check("outer-end-upper-bound", "q1(T) <= c4", q1_end, ledger.c4, false,
                 report_tol));

  // (xi) the compactness bound itself
  double q1_max = 0.0;
  for (const TrajectorySample& s : samples) q1_max = std::max(q1_max, s.state.q1);
  report.checks.push_back(make_check("compactness-bound",
                                     "max{q1, 1/(q1-q2)} <= kappa",
                                     std::max(q1_max, 1.0 / min_gap), ledger.kappa, false,
                                     report_tol));

  // (xii) conservation of the first integral
  report.checks.push_back(make_check("energy-drift", "max|E(t) - E(0)| <= tol",
                                     orb.traj.energy_drift(), report_tol, true, report_tol));

  // (xiii) mean contraction of the inner electron
  report.checks.push_back(make_check("mean-vs-start-contraction",
                                     "mean2 <= (1 - eps) q2(0)", means.m2,
                                     (1.0 - ledger.eps) * q2_start, false, report_tol));

  return report;
}

}  // namespace fpo
