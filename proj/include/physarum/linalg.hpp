#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

namespace physarum {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

// Relative threshold below which an orthogonalized row counts as dependent.
inline constexpr double kRankTolerance = 1e-10;

/// Greedy row selection in index order: a row is kept iff it is linearly
/// independent of the rows kept before it. This is row-pivoted Gram-Schmidt
/// with first-eligible tie-breaking, so the result depends only on the matrix
/// and is reproducible across calls. Used for both the energy solve and the
/// oracle's rank, so the two agree on degenerate instances.
inline IndexList independent_rows(const Matrix& a, double tol = kRankTolerance) {
  IndexList kept;
  std::vector<Eigen::RowVectorXd> basis;
  for (Index i = 0; i < a.rows(); ++i) {
    Eigen::RowVectorXd v = a.row(i);
    // two passes of modified Gram-Schmidt keep the residual honest
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) v -= v.dot(u) * u;
    }
    const double norm = v.norm();
    if (norm > tol * std::max(1.0, a.row(i).norm())) {
      basis.push_back(v / norm);
      kept.push_back(i);
    }
  }
  return kept;
}

inline Index numerical_rank(const Matrix& a) {
  return static_cast<Index>(independent_rows(a).size());
}

inline Matrix select_columns(const Matrix& a, const IndexList& cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = a.col(cols[k]);
  return out;
}

inline Matrix select_rows(const Matrix& a, const IndexList& rows) {
  Matrix out(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = a.row(rows[k]);
  return out;
}

inline Vector select(const Vector& v, const IndexList& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Index>(k)) = v(idx[k]);
  return out;
}

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

inline double one_norm(const Vector& v) { return v.cwiseAbs().sum(); }

/// Binomial coefficient saturating at `cap + 1`, so enumeration guards never overflow.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(r));
}

/// Advances `comb` (strictly increasing indices < n) to the next k-subset in
/// lexicographic order. Returns false after the last subset.
inline bool next_combination(IndexList& comb, Index n) {
  const auto k = static_cast<Index>(comb.size());
  Index i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

inline IndexList first_combination(Index k) {
  IndexList comb(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  return comb;
}

}  // namespace physarum
