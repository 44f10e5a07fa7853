#pragma once

// V(x) = 2 c^T D^{-1} x - sum_{i in I} (c_i x*_i / d_i) ln x_i   with I = supp(x*),
// its derivative along the flow, and the barrier W used to keep I away from zero.

#include "physarum/energy.hpp"
#include "physarum/error.hpp"
#include "physarum/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace physarum::lyapunov {

namespace detail {

inline void require_positive_on(const Vector& x, const Vector& weights, const char* what) {
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0 && !(x(i) > 0.0)) {
      throw Error(ErrorCode::boundary_contact,
                  std::string(what) + " undefined: x_" + std::to_string(i + 1) + " = 0 on the optimal support");
    }
  }
}

}  // namespace detail

inline double value(const PositiveLP& lp, const Vector& x, const Vector& xstar) {
  detail::require_positive_on(x, xstar, "V");
  const Vector& c = lp.c();
  const Vector& d = lp.d();
  double v = 2.0 * (c.array() * x.array() / d.array()).sum();
  for (Index i = 0; i < x.size(); ++i) {
    if (xstar(i) > 0.0) v -= c(i) * xstar(i) / d(i) * std::log(x(i));
  }
  return v;
}

/// Closed-form derivative and the Cauchy-Schwarz chain
///   c^T q <= sqrt(c^T x) sqrt(b^T p) <= (c^T x + b^T p) / 2.
struct Derivative {
  double vdot = 0.0;
  double ctq = 0.0;
  double ctx = 0.0;
  double btp = 0.0;
  double ctxstar = 0.0;
  double cs_middle = 0.0;
  double cs_right = 0.0;

  /// Chain holds within relative `rtol` of its largest term.
  bool chain_holds(double rtol = 1e-9) const {
    const double scale = std::max(1.0, std::abs(cs_right));
    return ctq <= cs_middle + rtol * scale && cs_middle <= cs_right + rtol * scale;
  }
};

/// V'(x) = 2 (c^T q - c^T x) + c^T x* - b^T p. Contains no d.
inline Derivative derivative(const PositiveLP& lp, const Vector& x, const Vector& xstar, const EnergySolution& sol) {
  detail::require_positive_on(x, xstar, "V'");
  Derivative r;
  r.ctq = lp.c().dot(sol.q);
  r.ctx = lp.c().dot(x);
  r.btp = sol.btp;
  r.ctxstar = lp.c().dot(xstar);
  r.vdot = 2.0 * (r.ctq - r.ctx) + r.ctxstar - r.btp;
  r.cs_middle = std::sqrt(std::max(0.0, r.ctx)) * std::sqrt(std::max(0.0, r.btp));
  r.cs_right = 0.5 * (r.ctx + r.btp);
  return r;
}

inline Derivative derivative(const PositiveLP& lp, const StateVector& x, const Vector& xstar) {
  return derivative(lp, x.x(), xstar, min_energy_solution(lp, x));
}

/// W(x) = sum_{j in I} (c_j y_j / d_j) ln x_j for an optimal y with supp(y) = I.
/// Along the flow W' >= -c^T y.
inline double barrier(const PositiveLP& lp, const Vector& x, const Vector& y) {
  detail::require_positive_on(x, y, "W");
  double w = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    if (y(j) > 0.0) w += lp.c()(j) * y(j) / lp.d()(j) * std::log(x(j));
  }
  return w;
}

/// Upper bound on ln(1 / x_h(t)) for h in I along the continuous flow from x0:
///   4m (c_max/c_min)(d_max/d_min) max(beta, x_max(0)) / x*_min * ln(max(beta, x_max(0)) / delta),
/// delta = min(1, min_{i in I} x_i(0)). Kept in log form; exp(-bound) underflows
/// for all but trivial instances.
inline double boundary_log_floor(const PositiveLP& lp, const Vector& x0, const Vector& xstar, double beta) {
  const double m = static_cast<double>(lp.cols());
  const double c_ratio = lp.c().maxCoeff() / lp.c().minCoeff();
  const double d_ratio = lp.d().maxCoeff() / lp.d().minCoeff();
  double xstar_min = std::numeric_limits<double>::infinity();
  double delta = 1.0;
  for (Index i = 0; i < xstar.size(); ++i) {
    if (xstar(i) > 0.0) {
      xstar_min = std::min(xstar_min, xstar(i));
      delta = std::min(delta, x0(i));
    }
  }
  const double big = std::max(beta, x0.maxCoeff());
  return 4.0 * m * c_ratio * d_ratio * big / xstar_min * std::log(big / delta);
}

}  // namespace physarum::lyapunov
