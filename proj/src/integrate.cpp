#include "fpo/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace fpo {

namespace {

// Dormand-Prince 5(4) pair with the standard quartic dense-output extension.
constexpr double kC2 = 1.0 / 5.0;
constexpr double kC3 = 3.0 / 10.0;
constexpr double kC4 = 4.0 / 5.0;
constexpr double kC5 = 8.0 / 9.0;

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

constexpr int kMaxDim = 8;
using Vec = std::array<double, kMaxDim>;

double dense_eval(const detail::DenseSegment& seg, int comp, double theta) {
  const auto& c = seg.cont[comp];
  const double th1 = 1.0 - theta;
  return c[0] + theta * (c[1] + th1 * (c[2] + theta * (c[3] + th1 * c[4])));
}

enum class Trial { Ok, Domain };

/// Embedded RK stepper with error control per unit step, so that the
/// accumulated defect scales linearly with the tolerances.
class AdaptiveStepper {
 public:
  using Rhs = std::function<void(double, const double*, double*)>;

  AdaptiveStepper(int dim, Rhs rhs, double rel_tol, double abs_tol, double max_h)
      : dim_(dim), rhs_(std::move(rhs)), rel_(rel_tol), abs_(abs_tol), max_h_(max_h) {}

  void init(double x0, const double* y0) {
    x_ = x0;
    std::copy(y0, y0 + dim_, y_.begin());
    rhs_(x_, y_.data(), k_[0].data());
    h_ = initial_step();
  }

  /// One accepted step; returns the number of trial attempts consumed.
  int step() {
    int attempts = 0;
    for (;;) {
      ++attempts;
      const Trial trial = attempt(h_);
      if (trial == Trial::Domain) {
        last_reject_domain_ = true;
        shrink(0.2);
        continue;
      }
      if (err_ <= h_) {
        commit(h_);
        const double q = err_ / h_;
        const double fac = q > 0.0 ? std::clamp(0.9 * std::pow(q, -0.25), 0.2, 5.0) : 5.0;
        h_ = std::min(max_h_, h_ * fac);
        return attempts;
      }
      last_reject_domain_ = false;
      shrink(std::clamp(0.9 * std::pow(err_ / h_, -0.25), 0.1, 0.9));
    }
  }

  /// Redo the last accepted step from its start point with a fixed size.
  void restep(double h) {
    x_ = x_prev_;
    y_ = y_prev_;
    k_[0] = k1_prev_;
    if (attempt(h) == Trial::Domain) {
      throw DomainError("domain left while refining an event inside an accepted step");
    }
    commit(h);
  }

  double x() const { return x_; }
  const Vec& y() const { return y_; }
  double x_prev() const { return x_prev_; }
  const Vec& y_prev() const { return y_prev_; }
  double h_used() const { return h_used_; }
  const std::array<std::array<double, 5>, 8>& cont() const { return cont_; }

  void set_max_h(double max_h) {
    max_h_ = max_h;
    h_ = std::min(h_, max_h);
  }

 private:
  double scale(int i, const Vec& a, const Vec& b) const {
    return abs_ + rel_ * std::max(std::abs(a[i]), std::abs(b[i]));
  }

  double initial_step() const {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double sc = abs_ + rel_ * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
    }
    d0 = std::sqrt(d0 / dim_);
    d1 = std::sqrt(d1 / dim_);
    double h = (d0 > 1e-12 && d1 > 1e-12) ? 0.01 * d0 / d1 : 1e-6;
    return std::min(h, max_h_);
  }

  void shrink(double factor) {
    h_ *= factor;
    if (h_ < 1e-14 * std::max(1.0, std::abs(x_))) {
      if (last_reject_domain_) {
        throw DomainError("step size underflow while leaving the admissible region");
      }
      throw NoCollisionError("integrator step size underflow");
    }
  }

  Trial attempt(double h) {
    Vec yt;
    try {
      for (int i = 0; i < dim_; ++i) yt[i] = y_[i] + h * kA21 * k_[0][i];
      rhs_(x_ + kC2 * h, yt.data(), k_[1].data());
      for (int i = 0; i < dim_; ++i) yt[i] = y_[i] + h * (kA31 * k_[0][i] + kA32 * k_[1][i]);
      rhs_(x_ + kC3 * h, yt.data(), k_[2].data());
      for (int i = 0; i < dim_; ++i) {
        yt[i] = y_[i] + h * (kA41 * k_[0][i] + kA42 * k_[1][i] + kA43 * k_[2][i]);
      }
      rhs_(x_ + kC4 * h, yt.data(), k_[3].data());
      for (int i = 0; i < dim_; ++i) {
        yt[i] = y_[i] + h * (kA51 * k_[0][i] + kA52 * k_[1][i] + kA53 * k_[2][i] +
                             kA54 * k_[3][i]);
      }
      rhs_(x_ + kC5 * h, yt.data(), k_[4].data());
      for (int i = 0; i < dim_; ++i) {
        yt[i] = y_[i] + h * (kA61 * k_[0][i] + kA62 * k_[1][i] + kA63 * k_[2][i] +
                             kA64 * k_[3][i] + kA65 * k_[4][i]);
      }
      rhs_(x_ + h, yt.data(), k_[5].data());
      for (int i = 0; i < dim_; ++i) {
        ynew_[i] = y_[i] + h * (kB1 * k_[0][i] + kB3 * k_[2][i] + kB4 * k_[3][i] +
                                kB5 * k_[4][i] + kB6 * k_[5][i]);
      }
      rhs_(x_ + h, ynew_.data(), k_[6].data());
    } catch (const DomainError&) {
      return Trial::Domain;
    }
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double e = h * (kE1 * k_[0][i] + kE3 * k_[2][i] + kE4 * k_[3][i] +
                            kE5 * k_[4][i] + kE6 * k_[5][i] + kE7 * k_[6][i]);
      const double r = e / scale(i, y_, ynew_);
      acc += r * r;
    }
    err_ = std::sqrt(acc / dim_);
    return Trial::Ok;
  }

  void commit(double h) {
    x_prev_ = x_;
    y_prev_ = y_;
    k1_prev_ = k_[0];
    for (int i = 0; i < dim_; ++i) {
      const double ydiff = ynew_[i] - y_[i];
      const double bspl = h * k_[0][i] - ydiff;
      cont_[i][0] = y_[i];
      cont_[i][1] = ydiff;
      cont_[i][2] = bspl;
      cont_[i][3] = ydiff - h * k_[6][i] - bspl;
      cont_[i][4] = h * (kD1 * k_[0][i] + kD3 * k_[2][i] + kD4 * k_[3][i] +
                         kD5 * k_[4][i] + kD6 * k_[5][i] + kD7 * k_[6][i]);
    }
    x_ += h;
    y_ = ynew_;
    k_[0] = k_[6];
    h_used_ = h;
  }

  int dim_;
  Rhs rhs_;
  double rel_, abs_, max_h_;
  double x_ = 0.0, h_ = 0.0, h_used_ = 0.0, err_ = 0.0;
  bool last_reject_domain_ = false;
  Vec y_{}, ynew_{};
  std::array<Vec, 7> k_{};
  double x_prev_ = 0.0;
  Vec y_prev_{}, k1_prev_{};
  std::array<std::array<double, 5>, 8> cont_{};
};

}  // namespace

/// Drives one trajectory from rest to the collision, switching charts
/// near q2 = 0.
class CollisionIntegrator {
 public:
  CollisionIntegrator(const InitialData& init, const MeanPair& means, HomotopyParam r,
                      const IntegratorOptions& opts)
      : init_(init),
        means_(means),
        r_(r.value()),
        opts_(opts),
        mean_coeff_(r.value() / (means.gap() * means.gap())),
        inst_coeff_(1.0 - r.value()) {
    if (!(init.a2 > 0.0) || !(init.a1 > init.a2)) {
      throw DomainError("initial data must satisfy 0 < a2 < a1");
    }
    if (!(means.m2 > 0.0) || !(means.m1 > means.m2)) {
      throw DomainError("mean ordering m1 > m2 > 0 violated");
    }
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
      throw DomainError("integrator tolerances must be positive");
    }
    if (!(opts.collision_threshold > 0.0) || opts.max_steps == 0) {
      throw DomainError("invalid integrator options");
    }
  }

  Trajectory run() {
    Trajectory traj;
    traj.r_ = r_;
    traj.force_means_ = means_;
    const PhaseState s0{init_.a1, init_.a2, 0.0, 0.0};
    e0_ = energy(s0, means_, HomotopyParam(r_));
    traj.samples_.push_back({0.0, s0, e0_});

    // Physical chart until q2 crosses the regularization threshold.
    double t_switch = 0.0;
    Vec yphys{init_.a1, init_.a2, 0.0, 0.0, 0.0, 0.0, -2.0 / init_.a2};
    if (init_.a2 > opts_.collision_threshold) {
      AdaptiveStepper stepper(
          7,
          [this](double t, const double* y, double* dy) { physical_rhs(t, y, dy); },
          opts_.rel_tol, opts_.abs_tol, 0.5);
      stepper.init(0.0, yphys.data());
      for (;;) {
        consume(stepper.step());
        if (stepper.y()[1] < opts_.collision_threshold) {
          refine_threshold_crossing(stepper);
          record_physical(traj, stepper);
          break;
        }
        record_physical(traj, stepper);
        if (stepper.x() > opts_.time_horizon) {
          throw NoCollisionError("no collision before the time horizon");
        }
      }
      yphys = stepper.y();
      t_switch = stepper.x();
    }

    // Regularized chart: xi = sqrt(q2), eta = xi v2 / 2; the carried inner
    // Kepler energy h transfers across the switch unchanged.
    Vec yreg{};
    yreg[0] = yphys[0];
    yreg[1] = yphys[2];
    yreg[2] = std::sqrt(yphys[1]);
    yreg[3] = 0.5 * yreg[2] * yphys[3];
    yreg[4] = yphys[6];
    yreg[5] = t_switch;
    yreg[6] = yphys[4];
    yreg[7] = yphys[5];

    const double xi0 = std::sqrt(opts_.collision_threshold);
    AdaptiveStepper reg(
        8, [this](double s, const double* y, double* dy) { regularized_rhs(s, y, dy); },
        opts_.rel_tol, opts_.abs_tol, xi0 / 8.0);
    reg.init(0.0, yreg.data());
    for (;;) {
      // Geometric cap on the step keeps the tail samples log-spaced in q2,
      // which is what the terminal power-law diagnostics need.
      reg.set_max_h(std::max(reg.y()[2] / 4.0, 1e-3 * xi0));
      consume(reg.step());
      if (reg.y()[2] <= 0.0) {
        refine_collision(reg);
        record_segment(traj, reg, /*regularized=*/true);
        break;
      }
      record_regularized(traj, reg);
      if (reg.y()[5] > opts_.time_horizon) {
        throw NoCollisionError("no collision before the time horizon");
      }
    }

    const Vec& yf = reg.y();
    const double T = yf[5];
    // Samples recorded within an ulp-scale distance of the collision carry
    // no information the dense output does not; drop them so t stays
    // strictly increasing up to the endpoint.
    while (traj.samples_.size() > 1 &&
           traj.samples_.back().t > T - 1e-14 * std::max(1.0, T)) {
      traj.samples_.pop_back();
    }
    traj.T_ = T;
    traj.samples_.push_back(
        {T, PhaseState{yf[0], 0.0, yf[1], -std::numeric_limits<double>::infinity()},
         regularized_energy(yf)});
    drift_ = std::max(drift_, std::abs(traj.samples_.back().energy - e0_));
    traj.means_ = MeanPair{yf[6] / T, yf[7] / T};
    traj.energy_drift_ = drift_;
    return traj;
  }

 private:
  void consume(int attempts) {
    steps_used_ += static_cast<std::size_t>(attempts);
    if (steps_used_ > opts_.max_steps) {
      throw NoCollisionError("collision not reached within max_steps");
    }
  }

  // Physical chart states: q1, q2, v1, v2, Q1, Q2, h with h = v2^2/2 - 2/q2.
  // The inner Kepler energy h rides along as a state because evaluating it
  // from v2 and q2 cancels catastrophically as q2 shrinks, while its
  // derivative v2 B stays bounded; energies of samples come from h.
  void physical_rhs(double, const double* y, double* dy) const {
    const double q1 = y[0], q2 = y[1];
    if (!(q2 > 0.0)) throw DomainError("q2 must be positive");
    if (!(q1 > q2)) throw DomainError("electron ordering q1 > q2 violated");
    const double gap = q1 - q2;
    const double inst = inst_coeff_ / (gap * gap);
    const double repulsion = mean_coeff_ + inst;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -2.0 / (q1 * q1) + repulsion;
    dy[3] = -2.0 / (q2 * q2) - repulsion;
    dy[4] = q1;
    dy[5] = q2;
    dy[6] = -y[3] * repulsion;
  }

  void regularized_rhs(double, const double* y, double* dy) const {
    const double q1 = y[0], v1 = y[1], xi = y[2], eta = y[3], hk = y[4];
    const double q2 = xi * xi;
    if (!(q1 > q2)) throw DomainError("electron ordering q1 > q2 violated");
    const double gap = q1 - q2;
    const double inst = inst_coeff_ / (gap * gap);
    const double repulsion = mean_coeff_ + inst;  // -B, the non-Kepler pull on q2
    dy[0] = q2 * v1;
    dy[1] = q2 * (-2.0 / (q1 * q1) + repulsion);
    dy[2] = eta;
    dy[3] = 0.5 * xi * (hk - q2 * repulsion);
    dy[4] = -2.0 * xi * eta * repulsion;
    dy[5] = q2;
    dy[6] = q2 * q1;
    dy[7] = q2 * q2;
  }

  /// Total first integral from the well-conditioned pieces.
  double energy_from(double q1, double v1, double q2, double hk) const {
    const double gap = q1 - q2;
    return 0.5 * v1 * v1 - 2.0 / q1 + hk - r_ * gap / (means_.gap() * means_.gap()) +
           inst_coeff_ / gap;
  }

  double regularized_energy(const Vec& y) const {
    return energy_from(y[0], y[1], y[2] * y[2], y[4]);
  }

  /// Dense-output bisection for component `comp` crossing `target`,
  /// assuming a sign change across the last accepted step.
  static double bracket_theta(const AdaptiveStepper& st, int comp, double target) {
    double lo = 0.0, hi = 1.0;
    const auto eval = [&](double th) {
      detail::DenseSegment seg;
      seg.cont[comp] = st.cont()[comp];
      return dense_eval(seg, comp, th) - target;
    };
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (eval(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  void refine_threshold_crossing(AdaptiveStepper& st) {
    const double thr = opts_.collision_threshold;
    double h = bracket_theta(st, 1, thr) * st.h_used();
    for (int i = 0; i < 6; ++i) {
      st.restep(h);
      consume(1);
      const double defect = st.y()[1] - thr;
      if (std::abs(defect) <= 1e-9 * thr) return;
      h -= defect / st.y()[3];
    }
  }

  void refine_collision(AdaptiveStepper& st) {
    double h = bracket_theta(st, 2, 0.0) * st.h_used();
    for (int i = 0; i < 10; ++i) {
      st.restep(h);
      consume(1);
      const double xi = st.y()[2];
      if (std::abs(xi) <= opts_.event_tol) return;
      h -= xi / st.y()[3];
    }
    if (std::abs(st.y()[2]) > 1e2 * opts_.event_tol) {
      throw NoConvergenceError("collision event refinement failed");
    }
  }

  void record_segment(Trajectory& traj, const AdaptiveStepper& st, bool regularized) const {
    detail::DenseSegment seg;
    seg.regularized = regularized;
    seg.x0 = st.x_prev();
    seg.h = st.h_used();
    seg.dim = regularized ? 8 : 7;
    seg.cont = st.cont();
    if (regularized) {
      seg.t_begin = st.y_prev()[5];
      seg.t_end = st.y()[5];
    } else {
      seg.t_begin = st.x_prev();
      seg.t_end = st.x();
    }
    traj.segments_.push_back(seg);
  }

  void record_physical(Trajectory& traj, const AdaptiveStepper& st) {
    const Vec& y = st.y();
    const PhaseState s{y[0], y[1], y[2], y[3]};
    const double e = energy_from(y[0], y[2], y[1], y[6]);
    traj.samples_.push_back({st.x(), s, e});
    drift_ = std::max(drift_, std::abs(e - e0_));
    record_segment(traj, st, /*regularized=*/false);
  }

  void record_regularized(Trajectory& traj, const AdaptiveStepper& st) {
    const Vec& y = st.y();
    const double xi = y[2];
    const double v2 = 2.0 * y[3] / xi;
    const double e = regularized_energy(y);
    traj.samples_.push_back({y[5], PhaseState{y[0], xi * xi, y[1], v2}, e});
    drift_ = std::max(drift_, std::abs(e - e0_));
    record_segment(traj, st, /*regularized=*/true);
  }

  InitialData init_;
  MeanPair means_;
  double r_;
  IntegratorOptions opts_;
  double mean_coeff_;
  double inst_coeff_;
  double e0_ = 0.0;
  double drift_ = 0.0;
  std::size_t steps_used_ = 0;
};

Trajectory integrate_to_collision(const InitialData& init, const MeanPair& means,
                                  HomotopyParam r, const IntegratorOptions& opts) {
  return CollisionIntegrator(init, means, r, opts).run();
}

MeanPair trajectory_means(const Trajectory& traj) { return traj.means(); }

namespace {

double hermite(double s, double dt, double y0, double d0, double y1, double d1) {
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * dt * d0 +
         (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * dt * d1;
}

double hermite_deriv(double s, double dt, double y0, double d0, double y1, double d1) {
  const double s2 = s * s;
  return ((6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * dt * d0 +
          (-6.0 * s2 + 6.0 * s) * y1 + (3.0 * s2 - 2.0 * s) * dt * d1) /
         dt;
}

}  // namespace

PhaseState Trajectory::state_at(double t) const {
  if (samples_.empty()) throw DomainError("empty trajectory");
  if (t <= 0.0) return samples_.front().state;
  if (t >= T_) return samples_.back().state;

  if (has_dense_output()) {
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                               [](const detail::DenseSegment& seg, double tv) {
                                 return seg.t_end < tv;
                               });
    if (it == segments_.end()) --it;
    const detail::DenseSegment& seg = *it;
    if (!seg.regularized) {
      const double theta = (t - seg.x0) / seg.h;
      return {dense_eval(seg, 0, theta), dense_eval(seg, 1, theta),
              dense_eval(seg, 2, theta), dense_eval(seg, 3, theta)};
    }
    // Invert the monotone time component t(s), then read the chart off.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dense_eval(seg, 5, mid) < t ? lo : hi) = mid;
    }
    const double theta = 0.5 * (lo + hi);
    const double xi = dense_eval(seg, 2, theta);
    const double eta = dense_eval(seg, 3, theta);
    const double v2 = xi > 0.0 ? 2.0 * eta / xi : -std::numeric_limits<double>::infinity();
    return {dense_eval(seg, 0, theta), xi * xi, dense_eval(seg, 1, theta), v2};
  }

  // Hermite fallback for file-parsed trajectories; the terminal interval
  // uses the Kepler collision power laws because v2 diverges there.
  auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const TrajectorySample& s, double tv) { return s.t < tv; });
  const std::size_t hi_idx = static_cast<std::size_t>(it - samples_.begin());
  const std::size_t lo_idx = hi_idx - 1;
  const TrajectorySample& a = samples_[lo_idx];
  const TrajectorySample& b = samples_[hi_idx];
  const double dt = b.t - a.t;
  const double s = (t - a.t) / dt;
  PhaseState out;
  out.q1 = hermite(s, dt, a.state.q1, a.state.v1, b.state.q1, b.state.v1);
  out.v1 = hermite_deriv(s, dt, a.state.q1, a.state.v1, b.state.q1, b.state.v1);
  if (hi_idx + 1 == samples_.size() && !std::isfinite(b.state.v2)) {
    const double rem = (T_ - t) / (T_ - a.t);
    out.q2 = a.state.q2 * std::pow(rem, 2.0 / 3.0);
    out.v2 = a.state.v2 * std::pow(rem, -1.0 / 3.0);
  } else {
    out.q2 = hermite(s, dt, a.state.q2, a.state.v2, b.state.q2, b.state.v2);
    out.v2 = hermite_deriv(s, dt, a.state.q2, a.state.v2, b.state.q2, b.state.v2);
  }
  return out;
}

double Trajectory::energy_at(double t) const {
  if (samples_.empty()) throw DomainError("empty trajectory");
  if (t <= 0.0) return samples_.front().energy;
  if (t >= T_) return samples_.back().energy;

  if (has_dense_output()) {
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                               [](const detail::DenseSegment& seg, double tv) {
                                 return seg.t_end < tv;
                               });
    if (it == segments_.end()) --it;
    const detail::DenseSegment& seg = *it;
    double q1, q2, v1, hk;
    if (!seg.regularized) {
      const double theta = (t - seg.x0) / seg.h;
      q1 = dense_eval(seg, 0, theta);
      q2 = dense_eval(seg, 1, theta);
      v1 = dense_eval(seg, 2, theta);
      hk = dense_eval(seg, 6, theta);
    } else {
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (dense_eval(seg, 5, mid) < t ? lo : hi) = mid;
      }
      const double theta = 0.5 * (lo + hi);
      q1 = dense_eval(seg, 0, theta);
      const double xi = dense_eval(seg, 2, theta);
      q2 = xi * xi;
      v1 = dense_eval(seg, 1, theta);
      hk = dense_eval(seg, 4, theta);
    }
    const double gap = q1 - q2;
    const double mg = force_means_.gap();
    return 0.5 * v1 * v1 - 2.0 / q1 + hk - r_ * gap / (mg * mg) + (1.0 - r_) / gap;
  }

  auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const TrajectorySample& s, double tv) { return s.t < tv; });
  const TrajectorySample& b = *it;
  const TrajectorySample& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return (1.0 - w) * a.energy + w * b.energy;
}

Trajectory Trajectory::from_samples(std::vector<TrajectorySample> samples, double T,
                                    MeanPair means, double energy_drift, double r,
                                    MeanPair force_means) {
  Trajectory traj;
  traj.samples_ = std::move(samples);
  traj.T_ = T;
  traj.means_ = means;
  traj.energy_drift_ = energy_drift;
  traj.r_ = r;
  traj.force_means_ = force_means;
  return traj;
}

Trajectory resample_uniform(const Trajectory& traj, std::size_t n) {
  if (n < 2) throw DomainError("resample_uniform requires n >= 2");
  Trajectory out = traj;
  out.samples_.clear();
  out.samples_.reserve(n);
  out.samples_.push_back(traj.samples().front());
  const double T = traj.collision_time();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double t = T * static_cast<double>(j) / static_cast<double>(n - 1);
    out.samples_.push_back({t, traj.state_at(t), traj.energy_at(t)});
  }
  out.samples_.push_back(traj.samples().back());
  return out;
}

}  // namespace fpo
