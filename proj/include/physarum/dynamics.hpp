#pragma once

// Forward-Euler integration of x' = D (q(x) - x) restricted to supp(x):
//   x_i(t+1) = (1 - h d_i) x_i(t) + h d_i q_i(t)   for i in supp(x(t)),
// with step k mapped to continuous time k*h.

#include "physarum/energy.hpp"
#include "physarum/error.hpp"
#include "physarum/lyapunov.hpp"
#include "physarum/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace physarum {

/// f(x): d_i (q_i - x_i) on supp(x), 0 elsewhere.
inline Vector rhs(const PositiveLP& lp, const StateVector& x, const EnergySolution& sol) {
  Vector f = Vector::Zero(lp.cols());
  for (Index i : x.support()) f(i) = lp.d()(i) * (sol.q(i) - x[i]);
  return f;
}

inline Vector rhs(const PositiveLP& lp, const StateVector& x) { return rhs(lp, x, min_energy_solution(lp, x)); }

struct StepResult {
  StateVector state;
  IndexList dropped;     ///< coordinates clamped to zero and removed from the support
  IndexList protected_hits;  ///< coordinates in I that reached the zero threshold
};

/// One Euler step from x given q(x). Coordinates outside supp(x) stay exactly
/// zero. A coordinate pushed to or below the zero threshold is clamped to 0
/// and dropped; if it belongs to `protected_set` (the optimal support I) that
/// is reported as a step-size problem.
inline StepResult euler_step(const PositiveLP& lp, const StateVector& x, const EnergySolution& sol, double h,
                             const IndexList& protected_set = {}) {
  Vector next = Vector::Zero(lp.cols());
  for (Index i : x.support()) {
    const double hd = h * lp.d()(i);
    next(i) = (1.0 - hd) * x[i] + hd * sol.q(i);
  }
  if (!next.allFinite()) throw Error(ErrorCode::numerical_failure, "Euler step produced non-finite values");
  StepResult r;
  const double thr = zero_threshold(next);
  for (Index i : x.support()) {
    if (next(i) <= thr) {
      next(i) = 0.0;
      r.dropped.push_back(i);
      if (std::find(protected_set.begin(), protected_set.end(), i) != protected_set.end()) r.protected_hits.push_back(i);
    }
  }
  r.state = StateVector(std::move(next));
  return r;
}

inline StepResult euler_step(const PositiveLP& lp, const StateVector& x, double h, const IndexList& protected_set = {}) {
  return euler_step(lp, x, min_energy_solution(lp, x), h, protected_set);
}

// ---------------------------------------------------------------------------

struct IntegratorConfig {
  double h = 0.0;
  double epsilon = 0.1;
  long max_steps = 0;
  long record_every = 1;
  double epsilon_feas = 1e-6;
  double epsilon_gap = 1e-6;
  /// Optimal solution with supp = I; enables V / V' monitors and protects I.
  std::optional<Vector> xstar;
  /// Uniform bound on |q|; computed from the subdeterminant bound if absent.
  std::optional<double> beta;

  /// h = 1/(2|c|_1), epsilon = 1/10, max_steps = ceil((1/h) ln(|c|_1 / epsilon)).
  static IntegratorConfig defaults_for(const PositiveLP& lp, double epsilon = 0.1) {
    IntegratorConfig cfg;
    const double c1 = one_norm(lp.c());
    cfg.h = 1.0 / (2.0 * c1);
    cfg.epsilon = epsilon;
    cfg.max_steps = iteration_budget(c1, cfg.h, epsilon);
    return cfg;
  }

  static long iteration_budget(double c1, double h, double epsilon) {
    return static_cast<long>(std::ceil(std::log(c1 / epsilon) / h));
  }
};

struct Monitor {
  double ctx = 0.0;
  double residual_inf = 0.0;
  double V = std::numeric_limits<double>::quiet_NaN();
  double Vdot = std::numeric_limits<double>::quiet_NaN();
  double btp = 0.0;
  double ctq = 0.0;
  double cs_middle = 0.0;
  double cs_right = 0.0;
};

enum class StopReason { converged, max_steps };

struct Trajectory {
  double h = 0.0;
  std::vector<long> steps;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Monitor> monitors;
  StopReason stop = StopReason::max_steps;
  long steps_taken = 0;
  bool h_clamped = false;
  IndexList dropped;         ///< coordinates that left the support, in order
  IndexList protected_hits;  ///< coordinates of I that touched zero (step too large)
  std::vector<std::string> warnings;

  bool converged() const noexcept { return stop == StopReason::converged; }
  const Vector& final_state() const { return states.back(); }
  const Monitor& final_monitor() const { return monitors.back(); }
};

namespace detail {

inline Monitor make_monitor(const PositiveLP& lp, const StateVector& x, const EnergySolution& sol,
                            const std::optional<Vector>& xstar) {
  Monitor mon;
  mon.ctx = lp.c().dot(x.x());
  mon.residual_inf = inf_norm(lp.A() * x.x() - lp.b());
  mon.btp = sol.btp;
  mon.ctq = lp.c().dot(sol.q);
  mon.cs_middle = std::sqrt(std::max(0.0, mon.ctx)) * std::sqrt(std::max(0.0, mon.btp));
  mon.cs_right = 0.5 * (mon.ctx + mon.btp);
  if (xstar && x.positive_on(support_of(*xstar))) {
    mon.V = lyapunov::value(lp, x.x(), *xstar);
    mon.Vdot = lyapunov::derivative(lp, x.x(), *xstar, sol).vdot;
  }
  return mon;
}

inline void record(Trajectory& traj, long step, const StateVector& x, const Monitor& mon) {
  traj.steps.push_back(step);
  traj.times.push_back(static_cast<double>(step) * traj.h);
  traj.states.push_back(x.x());
  traj.monitors.push_back(mon);
}

}  // namespace detail

/// Runs Euler steps from x0 until the stop rule
///   |A x - b|_inf <= epsilon_feas  and  |c^T x - c^T q(x)| <= epsilon_gap
/// fires or max_steps is reached. Every record_every-th state, and always the
/// last one, is stored with its monitors.
inline Trajectory integrate(const PositiveLP& lp, const StateVector& x0, const IntegratorConfig& cfg_in) {
  IntegratorConfig cfg = cfg_in;
  if (x0.size() != lp.cols()) throw Error(ErrorCode::dimension_mismatch, "x0 length differs from m");
  if (!(cfg.h > 0.0)) throw Error(ErrorCode::invalid_argument, "step size must be positive");
  if (cfg.record_every < 1) throw Error(ErrorCode::invalid_argument, "record_every must be >= 1");
  if (cfg.max_steps < 0) throw Error(ErrorCode::invalid_argument, "max_steps must be >= 0");

  Trajectory traj;
  const double d_max = lp.d().maxCoeff();
  if (cfg.h * d_max > 1.0) {
    traj.h_clamped = true;
    traj.warnings.push_back("h*d_max = " + std::to_string(cfg.h * d_max) + " > 1; h clamped to 1/d_max");
    cfg.h = 1.0 / d_max;
  }
  traj.h = cfg.h;

  IndexList protected_set;
  if (cfg.xstar) {
    protected_set = support_of(*cfg.xstar);
    if (!x0.positive_on(protected_set)) {
      throw Error(ErrorCode::invalid_argument, "x0 is not positive on the optimal support I");
    }
  }

  double beta = 1.0;
  if (cfg.beta) {
    beta = *cfg.beta;
  } else {
    try {
      beta = subdeterminant_bound(lp).beta;
    } catch (const Error&) {
      // Enumeration too large: the guard below then only uses |x0|.
    }
  }
  const double divergence_limit = 1e6 * std::max(inf_norm(x0.x()), beta);

  EnergySolver solver(lp);
  StateVector x = x0;
  for (long step = 0;; ++step) {
    const EnergySolution sol = solver.solve(x);
    const Monitor mon = detail::make_monitor(lp, x, sol, cfg.xstar);
    const bool done = mon.residual_inf <= cfg.epsilon_feas && std::abs(mon.ctx - mon.ctq) <= cfg.epsilon_gap;
    if (done || step >= cfg.max_steps) {
      detail::record(traj, step, x, mon);
      traj.stop = done ? StopReason::converged : StopReason::max_steps;
      traj.steps_taken = step;
      break;
    }
    if (step % cfg.record_every == 0) detail::record(traj, step, x, mon);

    StepResult next = euler_step(lp, x, sol, cfg.h, protected_set);
    for (Index i : next.dropped) traj.dropped.push_back(i);
    for (Index i : next.protected_hits) {
      traj.protected_hits.push_back(i);
      traj.warnings.push_back("step " + std::to_string(step + 1) + ": x_" + std::to_string(i + 1) +
                              " in I reached zero; step size too large");
    }
    if (inf_norm(next.state.x()) > divergence_limit) {
      throw Error(ErrorCode::divergence, "|x|_inf exceeded 1e6 * max(|x0|_inf, beta) at step " + std::to_string(step + 1));
    }
    x = std::move(next.state);
  }
  return traj;
}

/// Number of Euler steps until `reached(c^T x)` first holds, without
/// recording anything; returns nullopt if `cap` steps are exhausted.
template <class Predicate>
std::optional<long> steps_until(const PositiveLP& lp, const StateVector& x0, double h, long cap, Predicate reached) {
  EnergySolver solver(lp);
  StateVector x = x0;
  for (long step = 0; step <= cap; ++step) {
    if (reached(lp.c().dot(x.x()), x)) return step;
    if (step == cap) break;
    const EnergySolution sol = solver.solve(x);
    x = euler_step(lp, x, sol, h).state;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct FieldSample {
  double x1 = 0.0;
  double x2 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

struct Grid {
  double x1_min = 0.0, x1_max = 1.5;
  double x2_min = 0.0, x2_max = 1.5;
  int n1 = 16, n2 = 16;
};

/// f(x) on a rectangular grid of a planar (m = 2) instance. Grid points with a
/// nonpositive coordinate are skipped.
inline std::vector<FieldSample> flow_field(const PositiveLP& lp, const Grid& grid) {
  if (lp.cols() != 2) throw Error(ErrorCode::wrong_dimension, "flow fields need exactly two variables");
  if (grid.n1 < 2 || grid.n2 < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least 2 points per axis");
  std::vector<FieldSample> out;
  EnergySolver solver(lp);
  for (int i = 0; i < grid.n1; ++i) {
    const double x1 = grid.x1_min + (grid.x1_max - grid.x1_min) * i / (grid.n1 - 1);
    for (int j = 0; j < grid.n2; ++j) {
      const double x2 = grid.x2_min + (grid.x2_max - grid.x2_min) * j / (grid.n2 - 1);
      if (!(x1 > 0.0 && x2 > 0.0)) continue;
      const StateVector x(Vector{{x1, x2}});
      const Vector f = rhs(lp, x, solver.solve(x));
      out.push_back({x1, x2, f(0), f(1)});
    }
  }
  return out;
}

}  // namespace physarum
