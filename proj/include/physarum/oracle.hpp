#pragma once

// Ground truth by exhaustive enumeration of basic solutions. Desk-scale only.

#include "physarum/energy.hpp"
#include "physarum/error.hpp"
#include "physarum/linalg.hpp"
#include "physarum/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace physarum {

struct OracleResult {
  bool feasible = false;
  double optimal_value = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vector> optimal_vertices;
  IndexList I;  ///< union of supports of the optimal vertices
  Vector xstar_interior;  ///< average of the optimal vertices, supp = I
  std::size_t bases_examined = 0;
};

// Two basic solutions are optimal together when their costs agree to this
// relative tolerance. I depends on it.
inline constexpr double kOptimalTieTolerance = 1e-9;

namespace detail {

inline bool same_vertex(const Vector& u, const Vector& v) {
  return (u - v).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, std::max(inf_norm(u), inf_norm(v)));
}

}  // namespace detail

/// Enumerates every column subset of size rank(A) in lexicographic order,
/// solves the square system on the independent rows, and keeps the
/// nonnegative solutions that satisfy all of A x = b. Infeasible instances
/// come back with feasible = false; c > 0 rules out unboundedness.
inline OracleResult solve_exhaustive(const PositiveLP& lp) {
  const Matrix& A = lp.A();
  const IndexList rows = independent_rows(A);
  const auto r = static_cast<Index>(rows.size());
  const auto m = A.cols();
  if (binomial_capped(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r), kMaxEnumeration) >
      kMaxEnumeration) {
    throw Error(ErrorCode::too_large, "more than 1e6 basis candidates");
  }
  const Matrix a_r = select_rows(A, rows);
  const Vector b_r = select(lp.b(), rows);
  const double b_scale = std::max(1.0, inf_norm(lp.b()));

  std::vector<Vector> vertices;
  OracleResult res;
  IndexList cols = first_combination(r);
  do {
    ++res.bases_examined;
    const Matrix basis = select_columns(a_r, cols);
    Eigen::FullPivLU<Matrix> lu(basis);
    lu.setThreshold(kRankTolerance);
    if (lu.rank() < r) continue;
    const Vector xb = lu.solve(b_r);
    const double tol = 1e-9 * std::max(1.0, inf_norm(xb));
    if ((xb.array() < -tol).any()) continue;
    Vector x = Vector::Zero(m);
    for (Index k = 0; k < r; ++k) x(cols[static_cast<std::size_t>(k)]) = std::max(0.0, xb(k));
    if (inf_norm(A * x - lp.b()) > 1e-9 * b_scale) continue;
    if (std::none_of(vertices.begin(), vertices.end(), [&](const Vector& v) { return detail::same_vertex(v, x); })) {
      vertices.push_back(std::move(x));
    }
  } while (next_combination(cols, m));

  if (vertices.empty()) return res;
  res.feasible = true;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::min(best, lp.c().dot(v));
  res.optimal_value = best;
  for (const auto& v : vertices) {
    if (lp.c().dot(v) <= best + kOptimalTieTolerance * std::max(1.0, std::abs(best))) res.optimal_vertices.push_back(v);
  }
  res.xstar_interior = Vector::Zero(m);
  for (const auto& v : res.optimal_vertices) res.xstar_interior += v;
  res.xstar_interior /= static_cast<double>(res.optimal_vertices.size());
  res.I = support_of(res.xstar_interior);
  return res;
}

/// Euclidean distance from x to F = { z : A z = b, z >= 0 }.
///
/// The projection z* is positive exactly on some set S, and on S it is the
/// plain projection onto the affine set { A_S z_S = b, z off S = 0 }. So
/// enumerating every S, projecting, and keeping the nearest nonnegative
/// candidate gives the exact distance.
inline double feasibility_distance(const PositiveLP& lp, const Vector& x) {
  const Matrix& A = lp.A();
  const Index m = A.cols();
  if (x.size() != m) throw Error(ErrorCode::dimension_mismatch, "x length differs from m");
  if (m > 20) throw Error(ErrorCode::too_large, "more than 2^20 support patterns");
  const double b_scale = std::max(1.0, inf_norm(lp.b()));
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t patterns = 1u << static_cast<unsigned>(m);
  for (std::uint32_t mask = 1; mask < patterns; ++mask) {
    IndexList s;
    for (Index i = 0; i < m; ++i) {
      if (mask & (1u << static_cast<unsigned>(i))) s.push_back(i);
    }
    const Matrix a_s = select_columns(A, s);
    const Vector x_s = select(x, s);
    const Vector correction = a_s.completeOrthogonalDecomposition().solve(lp.b() - a_s * x_s);
    const Vector z_s = x_s + correction;
    if ((z_s.array() < -1e-12 * std::max(1.0, inf_norm(z_s))).any()) continue;
    if (inf_norm(a_s * z_s - lp.b()) > 1e-9 * b_scale) continue;
    Vector z = Vector::Zero(m);
    for (std::size_t k = 0; k < s.size(); ++k) z(s[k]) = std::max(0.0, z_s(static_cast<Index>(k)));
    best = std::min(best, (z - x).norm());
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::infeasible, "feasible region is empty");
  return best;
}

}  // namespace physarum
