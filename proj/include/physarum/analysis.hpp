#pragma once

// How two-variable trajectories of  min c1 x1 + c2 x2, x1 + x2 = 1, x >= 0
// (c2 > c1) enter the optimal vertex (1, 0). With x = (1 - e1, e2) the
// linearized flow is
//   e1' = -d1 e1 + (d1 c1 / c2) e2,      e2' = -((c2 - c1) d2 / c2) e2,
// so e2 decays at r2 = (c2 - c1) d2 / c2 and e1 at min(d1, r2). When d1 > r2
// both decay at r2 along the eigendirection and the entry is a straight line;
// when d1 < r2 the trajectory flattens onto the x1 axis.

#include "physarum/dynamics.hpp"
#include "physarum/error.hpp"
#include "physarum/problem.hpp"

#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

namespace physarum::analysis {

enum class Regime { horizontal, sloped, critical };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::horizontal: return "horizontal";
    case Regime::sloped: return "sloped";
    case Regime::critical: return "critical";
  }
  return "unknown";
}

struct EntryPrediction {
  Regime regime = Regime::critical;
  /// dx2/dx1 of the entry line through (1, 0); NaN unless sloped.
  double slope = std::numeric_limits<double>::quiet_NaN();
  double rate_eps1 = 0.0;
  double rate_eps2 = 0.0;
};

namespace detail {

inline void require_planar_costs(const Vector& c) {
  if (c.size() != 2) throw Error(ErrorCode::wrong_dimension, "expected two costs");
  if (!(c(0) > 0.0)) throw Error(ErrorCode::invalid_argument, "c1 must be positive");
  if (!(c(1) > c(0))) throw Error(ErrorCode::invalid_argument, "c2 must exceed c1 (optimum must be the vertex (1, 0))");
}

inline void require_planar_reactivity(const Vector& d) {
  if (d.size() != 2) throw Error(ErrorCode::wrong_dimension, "expected two reactivities");
  if (!(d(0) > 0.0 && d(1) > 0.0)) throw Error(ErrorCode::invalid_argument, "reactivities must be positive");
}

}  // namespace detail

inline EntryPrediction predict_entry(const Vector& c, const Vector& d) {
  detail::require_planar_costs(c);
  detail::require_planar_reactivity(d);
  const double c1 = c(0), c2 = c(1), d1 = d(0), d2 = d(1);
  EntryPrediction p;
  p.rate_eps2 = (c2 - c1) * d2 / c2;
  p.rate_eps1 = std::min(d1, p.rate_eps2);
  if (std::abs(d1 - p.rate_eps2) <= 1e-12 * std::max(d1, p.rate_eps2)) {
    p.regime = Regime::critical;
  } else if (d1 < p.rate_eps2) {
    p.regime = Regime::horizontal;
  } else {
    p.regime = Regime::sloped;
    p.slope = ((c2 - c1) * d2 - c2 * d1) / (c1 * d1);
  }
  return p;
}

/// q_i = x_i c_{3-i} / (x1 c2 + x2 c1) for two parallel edges carrying one unit.
inline Vector closed_form_q2(const Vector& c, const Vector& x) {
  if (c.size() != 2 || x.size() != 2) throw Error(ErrorCode::wrong_dimension, "expected two variables");
  if (x(0) < 0.0 || x(1) < 0.0) throw Error(ErrorCode::invalid_argument, "x must be nonnegative");
  const double total = x(0) * c(1) + x(1) * c(0);
  if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "x = 0 carries no flow");
  return Vector{{x(0) * c(1) / total, x(1) * c(0) / total}};
}

/// e1(t) = c1 d1 / (c2 d1 - (c2 - c1) d2) * [exp(-r2 t) - exp(-d1 t)] + C exp(-d1 t),
/// paired with e2(t) = exp(-r2 t).
inline double predicted_eps1_curve(const Vector& c, const Vector& d, double C, double t) {
  detail::require_planar_costs(c);
  detail::require_planar_reactivity(d);
  const double c1 = c(0), c2 = c(1), d1 = d(0), d2 = d(1);
  const double denom = c2 * d1 - (c2 - c1) * d2;
  if (std::abs(denom) <= 1e-12 * std::max(c2 * d1, (c2 - c1) * d2)) {
    throw Error(ErrorCode::inconclusive, "critical regime d1 = (c2 - c1) d2 / c2: the analysis is inconclusive");
  }
  const double r2 = (c2 - c1) * d2 / c2;
  return c1 * d1 / denom * (std::exp(-r2 * t) - std::exp(-d1 * t)) + C * std::exp(-d1 * t);
}

inline double predicted_eps2_curve(const Vector& c, const Vector& d, double t) {
  detail::require_planar_costs(c);
  detail::require_planar_reactivity(d);
  return std::exp(-(c(1) - c(0)) * d(1) / c(1) * t);
}

// ---------------------------------------------------------------------------

struct EntryMeasurement {
  Regime regime = Regime::critical;
  double slope = std::numeric_limits<double>::quiet_NaN();  ///< fitted dx2/dx1, sloped only
  std::size_t window_begin = 0;
  std::size_t window_end = 0;  ///< inclusive
  double ratio_start = 0.0;    ///< e2 / |e1| at the window start
  double ratio_end = 0.0;

  std::size_t window_size() const noexcept { return window_end - window_begin + 1; }
};

struct MeasureOptions {
  double eps_low = 1e-8;   ///< lower bound on |e1| (1 - x1 cancels below this)
  double eps_high = 1e-2;
  std::size_t min_states = 20;
  double horizontal_ratio = 0.05;
};

/// Fits the entry direction from the tail of a trajectory that converged to
/// (1, 0). The window is the last contiguous run of states with
/// |e1| in (eps_low, eps_high) and e2 in (0, eps_high); e2 = x2 is stored
/// directly and stays accurate below eps_low. The entry is horizontal when
/// e2/|e1| falls below horizontal_ratio of its window-start value; otherwise
/// the slope is the least-squares dx2/dx1 through (1, 0) over the later half
/// of the window.
inline EntryMeasurement measure_entry_slope(const std::vector<Vector>& states, const MeasureOptions& opt = {}) {
  auto qualifies = [&opt](const Vector& x) {
    const double e1 = std::abs(1.0 - x(0));
    const double e2 = x(1);
    return e1 > opt.eps_low && e1 < opt.eps_high && e2 > 0.0 && e2 < opt.eps_high;
  };
  std::size_t end = states.size();
  for (std::size_t k = states.size(); k-- > 0;) {
    if (states[k].size() != 2) throw Error(ErrorCode::wrong_dimension, "entry slopes need planar states");
    if (qualifies(states[k])) {
      end = k;
      break;
    }
  }
  if (end == states.size()) throw Error(ErrorCode::insufficient_data, "no tail states near (1, 0)");
  std::size_t begin = end;
  while (begin > 0 && qualifies(states[begin - 1])) --begin;

  EntryMeasurement m;
  m.window_begin = begin;
  m.window_end = end;
  if (m.window_size() < opt.min_states) {
    throw Error(ErrorCode::insufficient_data, "tail window has " + std::to_string(m.window_size()) + " states, need " +
                                                  std::to_string(opt.min_states));
  }
  auto ratio = [](const Vector& x) { return x(1) / std::abs(1.0 - x(0)); };
  m.ratio_start = ratio(states[begin]);
  m.ratio_end = ratio(states[end]);
  if (m.ratio_end < opt.horizontal_ratio * m.ratio_start) {
    m.regime = Regime::horizontal;
    return m;
  }
  m.regime = Regime::sloped;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = begin + m.window_size() / 2; k <= end; ++k) {
    const double e1 = 1.0 - states[k](0);
    const double e2 = states[k](1);
    sxy += e1 * e2;
    sxx += e1 * e1;
  }
  // direction of approach is (e1, -e2), so dx2/dx1 = -e2/e1
  m.slope = -sxy / sxx;
  return m;
}

inline EntryMeasurement measure_entry_slope(const Trajectory& traj, const MeasureOptions& opt = {}) {
  return measure_entry_slope(traj.states, opt);
}

// ---------------------------------------------------------------------------

struct SlopeRun {
  EntryPrediction predicted;
  EntryMeasurement measured;
  Trajectory trajectory;
};

/// Step size for entry-slope runs: the default 1/(2|c|_1), reduced so that
/// h d_i <= 1/2.
inline double slope_run_step(const Vector& c, const Vector& d) {
  return std::min(1.0 / (2.0 * one_norm(c)), 0.5 / d.maxCoeff());
}

/// Integrates the two-edge instance from x0 with tight stop tolerances so the
/// tail reaches well below the fitting window, then measures the entry.
inline SlopeRun run_slope_study(const Vector& c, const Vector& d, const Vector& x0, double h = 0.0) {
  SlopeRun run;
  run.predicted = predict_entry(c, d);
  const PositiveLP lp = parallel_edges_instance(c, d);
  IntegratorConfig cfg;
  cfg.h = h > 0.0 ? h : slope_run_step(c, d);
  cfg.max_steps = 2'000'000;
  cfg.epsilon_feas = 1e-13;
  cfg.epsilon_gap = 1e-13;
  run.trajectory = integrate(lp, StateVector(x0), cfg);
  run.measured = measure_entry_slope(run.trajectory);
  return run;
}

}  // namespace physarum::analysis
