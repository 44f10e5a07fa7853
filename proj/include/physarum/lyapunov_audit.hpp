#pragma once

#include "physarum/dynamics.hpp"
#include "physarum/lyapunov.hpp"
#include "physarum/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace physarum::lyapunov {

struct AuditOptions {
  double c_monotone = 10.0;  ///< per-step allowance c * h^2 * max(1, |V(x0)|)
  double c_fd = 10.0;        ///< allowance c * h * max(1, d_max)^2 * max(1, |V(x0)|) on |V'_fd - V'|
  double final_vdot_tol = 1e-5;
};

struct AuditReport {
  std::size_t states = 0;
  double h = 0.0;
  double scale = 1.0;  ///< max(1, |V(x0)|)
  std::vector<double> V;
  std::vector<double> Vdot;
  std::vector<double> Vdot_fd;

  double monotone_tolerance = 0.0;
  std::size_t monotone_violations = 0;
  double max_increase = -std::numeric_limits<double>::infinity();

  double fd_tolerance = 0.0;
  double max_fd_discrepancy = 0.0;
  bool fd_ok = true;

  double final_vdot = 0.0;
  bool final_ok = true;

  bool passed() const noexcept { return monotone_violations == 0 && fd_ok && final_ok; }
};

/// Finite-difference slope of `values` over `times`: central in the interior,
/// one-sided at the ends.
inline std::vector<double> finite_difference(const std::vector<double>& times, const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  out.front() = (values[1] - values[0]) / (times[1] - times[0]);
  out.back() = (values[n - 1] - values[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = (values[k + 1] - values[k - 1]) / (times[k + 1] - times[k - 1]);
  }
  return out;
}

/// Audits a recorded trajectory: (a) V non-increasing up to the Euler local
/// error, (b) finite-difference slope of V close to the closed-form V', and
/// (c) V' vanishing at the final state.
inline AuditReport monotonicity_audit(const Trajectory& traj, const PositiveLP& lp, const Vector& xstar,
                                      const AuditOptions& opt = {}) {
  AuditReport r;
  r.states = traj.states.size();
  r.h = traj.h;
  EnergySolver solver(lp);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Monitor& mon = traj.monitors[k];
    if (std::isfinite(mon.V) && std::isfinite(mon.Vdot)) {
      r.V.push_back(mon.V);
      r.Vdot.push_back(mon.Vdot);
    } else {
      const StateVector x(traj.states[k]);
      r.V.push_back(value(lp, x.x(), xstar));
      r.Vdot.push_back(derivative(lp, x.x(), xstar, solver.solve(x)).vdot);
    }
  }
  if (r.V.empty()) return r;
  r.scale = std::max(1.0, std::abs(r.V.front()));
  r.Vdot_fd = finite_difference(traj.times, r.V);

  r.monotone_tolerance = opt.c_monotone * r.h * r.h * r.scale;
  for (std::size_t k = 1; k < r.V.size(); ++k) {
    const double stride = std::round((traj.times[k] - traj.times[k - 1]) / r.h);
    const double increase = r.V[k] - r.V[k - 1];
    r.max_increase = std::max(r.max_increase, increase);
    if (increase > stride * r.monotone_tolerance) ++r.monotone_violations;
  }

  const double d_max = std::max(1.0, lp.d().maxCoeff());
  r.fd_tolerance = opt.c_fd * r.h * d_max * d_max * r.scale;
  for (std::size_t k = 1; k + 1 < r.V.size(); ++k) {
    r.max_fd_discrepancy = std::max(r.max_fd_discrepancy, std::abs(r.Vdot_fd[k] - r.Vdot[k]));
  }
  r.fd_ok = r.max_fd_discrepancy <= r.fd_tolerance;

  r.final_vdot = r.Vdot.back();
  r.final_ok = std::abs(r.final_vdot) <= opt.final_vdot_tol;
  return r;
}

/// Smallest discrete slope of the barrier W along the trajectory; the
/// continuous flow guarantees W' >= -c^T y.
inline double barrier_min_slope(const Trajectory& traj, const PositiveLP& lp, const Vector& y) {
  double worst = std::numeric_limits<double>::infinity();
  double prev = barrier(lp, traj.states.front(), y);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const double cur = barrier(lp, traj.states[k], y);
    worst = std::min(worst, (cur - prev) / (traj.times[k] - traj.times[k - 1]));
    prev = cur;
  }
  return worst;
}

inline std::string format_audit(const AuditReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << "lyapunov audit\n"
      << "  states                 " << r.states << '\n'
      << "  h                      " << r.h << '\n'
      << "  V(x0)                  " << (r.V.empty() ? 0.0 : r.V.front()) << '\n'
      << "  V(final)               " << (r.V.empty() ? 0.0 : r.V.back()) << '\n'
      << "  monotone tolerance     " << r.monotone_tolerance << '\n'
      << "  monotone violations    " << r.monotone_violations << '\n'
      << "  max single increase    " << r.max_increase << '\n'
      << "  fd tolerance           " << r.fd_tolerance << '\n'
      << "  max |V'_fd - V'|       " << r.max_fd_discrepancy << (r.fd_ok ? "  ok" : "  FAIL") << '\n'
      << "  final V'               " << r.final_vdot << (r.final_ok ? "  ok" : "  FAIL") << '\n'
      << "  result                 " << (r.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace physarum::lyapunov
