#pragma once

// Minimum-energy solution q(x) = argmin { sum_{i in B} (c_i / x_i) f_i^2 : A f = b, supp f in B }
// for B = supp(x), with potentials p and the subdeterminant bound on |q|.

#include "physarum/error.hpp"
#include "physarum/linalg.hpp"
#include "physarum/problem.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace physarum {

struct EnergySolution {
  Vector q;          ///< length m, zero off the support
  Vector p;          ///< length n, zero on rows dropped as dependent
  double btp = 0.0;  ///< b^T p
  double energy = 0.0;  ///< q^T R q, R = diag(c_i / x_i) on the support
  IndexList support;
  IndexList rows;    ///< independent rows of A_B kept for the solve
  double rcond = 1.0;   ///< reciprocal condition estimate of L_B
  bool least_squares_fallback = false;
};

// Reciprocal condition number below which L_B is treated as singular.
inline constexpr double kSingularRcond = 1e-12;

/// Reusable solver; caches the independent-row selection for the most recent
/// support, which never changes along a trajectory unless a coordinate is
/// dropped.
class EnergySolver {
 public:
  explicit EnergySolver(const PositiveLP& lp) : lp_(&lp) {}

  EnergySolution solve(const StateVector& state) {
    const PositiveLP& lp = *lp_;
    const Vector& x = state.x();
    if (x.size() != lp.cols()) throw Error(ErrorCode::dimension_mismatch, "state length differs from m");
    const IndexList& support = state.support();
    if (support.empty()) throw Error(ErrorCode::empty_support, "state has empty support");

    if (support != cached_support_) {
      cached_support_ = support;
      const Matrix a_b = select_columns(lp.A(), support);
      cached_rows_ = independent_rows(a_b);
      a_br_ = select_rows(a_b, cached_rows_);
      b_r_ = select(lp.b(), cached_rows_);
    }

    const auto k = static_cast<Index>(support.size());
    Vector conductance(k);
    for (Index j = 0; j < k; ++j) {
      const Index i = support[static_cast<std::size_t>(j)];
      conductance(j) = x(i) / lp.c()(i);
    }

    const Matrix laplacian = a_br_ * conductance.asDiagonal() * a_br_.transpose();
    EnergySolution sol;
    Vector p_r;
    Eigen::LLT<Matrix> llt(laplacian);
    sol.rcond = (llt.info() == Eigen::Success) ? llt.rcond() : 0.0;
    if (llt.info() == Eigen::Success && sol.rcond > kSingularRcond) {
      p_r = llt.solve(b_r_);
    } else {
      p_r = laplacian.completeOrthogonalDecomposition().solve(b_r_);
      sol.least_squares_fallback = true;
    }
    if (!p_r.allFinite()) throw Error(ErrorCode::numerical_failure, "potential solve produced non-finite values");

    const Vector q_b = conductance.cwiseProduct(a_br_.transpose() * p_r);
    sol.q = Vector::Zero(lp.cols());
    sol.energy = 0.0;
    for (Index j = 0; j < k; ++j) {
      const Index i = support[static_cast<std::size_t>(j)];
      sol.q(i) = q_b(j);
      sol.energy += q_b(j) * q_b(j) / conductance(j);
    }
    sol.p = Vector::Zero(lp.rows());
    for (std::size_t r = 0; r < cached_rows_.size(); ++r) sol.p(cached_rows_[r]) = p_r(static_cast<Index>(r));
    sol.btp = lp.b().dot(sol.p);
    sol.support = support;
    sol.rows = cached_rows_;

    // Rows dropped as dependent are only satisfied if b is consistent with them.
    const double residual = inf_norm(lp.A() * sol.q - lp.b());
    const double scale = std::max({1.0, inf_norm(lp.b()), lp.A().cwiseAbs().maxCoeff() * inf_norm(sol.q)});
    if (!(residual <= 1e-8 * scale)) {
      throw Error(ErrorCode::infeasible_on_support,
                  "b is not reachable with the columns in supp(x) (residual " + std::to_string(residual) + ")");
    }
    return sol;
  }

 private:
  const PositiveLP* lp_;
  IndexList cached_support_;
  IndexList cached_rows_;
  Matrix a_br_;
  Vector b_r_;
};

inline EnergySolution min_energy_solution(const PositiveLP& lp, const StateVector& x) {
  return EnergySolver(lp).solve(x);
}

// ---------------------------------------------------------------------------

struct SubdeterminantBound {
  double M = 0.0;     ///< max |det| over all square submatrices of A
  double beta = 0.0;  ///< M * |b|_1, the uniform bound on |q(x)|_inf
};

inline constexpr std::uint64_t kMaxEnumeration = 1'000'000;

/// Exhaustive enumeration of every square submatrix of every size.
inline SubdeterminantBound subdeterminant_bound(const PositiveLP& lp) {
  const Matrix& A = lp.A();
  const auto n = static_cast<std::uint64_t>(A.rows());
  const auto m = static_cast<std::uint64_t>(A.cols());
  std::uint64_t total = 0;
  for (std::uint64_t k = 1; k <= std::min(n, m); ++k) {
    const auto rows = binomial_capped(n, k, kMaxEnumeration);
    const auto cols = binomial_capped(m, k, kMaxEnumeration);
    if (rows > kMaxEnumeration || cols > kMaxEnumeration || rows * cols > kMaxEnumeration ||
        total + rows * cols > kMaxEnumeration) {
      throw Error(ErrorCode::too_large, "too-large-for-exact-M: more than 1e6 square submatrices");
    }
    total += rows * cols;
  }

  double best = 0.0;
  for (Index k = 1; k <= static_cast<Index>(std::min(n, m)); ++k) {
    IndexList rs = first_combination(k);
    do {
      const Matrix sub_rows = select_rows(A, rs);
      IndexList cs = first_combination(k);
      do {
        const Matrix sub = select_columns(sub_rows, cs);
        const double det = (k == 1) ? sub(0, 0) : sub.partialPivLu().determinant();
        best = std::max(best, std::abs(det));
      } while (next_combination(cs, A.cols()));
    } while (next_combination(rs, A.rows()));
  }
  // Integer matrices have integer minors; strip LU round-off in that case.
  if ((A.array() == A.array().round()).all()) best = std::round(best);
  return {best, best * one_norm(lp.b())};
}

// ---------------------------------------------------------------------------

struct PotentialBoundReport {
  double epsilon = 0.0;  ///< min_{i in supp y} x_i / y_i
  double lhs = 0.0;      ///< |A_B^T p_B|_inf
  double bound = 0.0;    ///< |c|_1 * M / epsilon
  bool holds = false;
};

/// Checks |A_B^T p_B|_inf <= |c|_1 M / eps for a feasible y with supp(y) in supp(x).
inline PotentialBoundReport potential_bound_check(const PositiveLP& lp, const StateVector& x, const Vector& y,
                                                  double M) {
  if (y.size() != lp.cols()) throw Error(ErrorCode::dimension_mismatch, "y length differs from m");
  const double thr = zero_threshold(y);
  if ((y.array() < -thr).any()) throw Error(ErrorCode::infeasible, "y has negative entries");
  if (inf_norm(lp.A() * y - lp.b()) > 1e-9 * std::max(1.0, inf_norm(lp.b()))) {
    throw Error(ErrorCode::infeasible, "y does not satisfy A y = b");
  }
  PotentialBoundReport r;
  r.epsilon = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) <= thr) continue;
    if (!x.in_support(i)) throw Error(ErrorCode::infeasible, "supp(y) is not contained in supp(x)");
    r.epsilon = std::min(r.epsilon, x[i] / y(i));
  }
  const EnergySolution sol = min_energy_solution(lp, x);
  const Vector atp = lp.A().transpose() * sol.p;
  for (Index i : sol.support) r.lhs = std::max(r.lhs, std::abs(atp(i)));
  r.bound = one_norm(lp.c()) * M / r.epsilon;
  r.holds = r.lhs <= r.bound * (1.0 + 1e-12);
  return r;
}

inline PotentialBoundReport potential_bound_check(const PositiveLP& lp, const StateVector& x, const Vector& y) {
  return potential_bound_check(lp, x, y, subdeterminant_bound(lp).M);
}

}  // namespace physarum
