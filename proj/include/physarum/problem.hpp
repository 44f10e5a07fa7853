#pragma once

// Positive linear programs  min c^T x  s.t.  A x = b, x >= 0  with c > 0,
// together with the reactivity vector d of the dynamics x' = D (q(x) - x).

#include "physarum/error.hpp"
#include "physarum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace physarum {

/// Unvalidated instance data, as parsed or assembled by a builder.
struct ProblemData {
  Matrix A;
  Vector b;
  Vector c;
  Vector d;
  std::string name;
};

struct ValidationReport {
  bool valid = true;
  Index rows = 0;
  Index cols = 0;
  Index rank = 0;
  std::vector<std::string> errors;
  std::vector<std::string> notes;
};

inline ValidationReport validate(const ProblemData& p) {
  ValidationReport r;
  r.rows = p.A.rows();
  r.cols = p.A.cols();
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.errors.push_back(std::move(msg));
  };
  if (r.rows < 1 || r.cols < 1) {
    fail("constraint matrix must have at least one row and one column");
    return r;
  }
  if (p.b.size() != r.rows) fail("b has length " + std::to_string(p.b.size()) + ", expected n = " + std::to_string(r.rows));
  if (p.c.size() != r.cols) fail("c has length " + std::to_string(p.c.size()) + ", expected m = " + std::to_string(r.cols));
  if (p.d.size() != r.cols) fail("d has length " + std::to_string(p.d.size()) + ", expected m = " + std::to_string(r.cols));
  if (!p.A.allFinite() || !p.b.allFinite() || !p.c.allFinite() || !p.d.allFinite()) fail("non-finite entry");
  if (!r.valid) return r;

  for (Index i = 0; i < r.cols; ++i) {
    if (!(p.c(i) > 0.0)) fail("cost not strictly positive at column " + std::to_string(i + 1));
    if (!(p.d(i) > 0.0)) fail("reactivity not strictly positive at column " + std::to_string(i + 1));
    if (p.A.col(i).cwiseAbs().maxCoeff() == 0.0) fail("all-zero column " + std::to_string(i + 1));
  }
  r.rank = numerical_rank(p.A);
  if (r.rank < r.rows) {
    r.notes.push_back("redundant rows (rank " + std::to_string(r.rank) + " < n = " + std::to_string(r.rows) + ")");
  }
  return r;
}

/// A validated positive LP. Immutable after construction.
class PositiveLP {
 public:
  explicit PositiveLP(ProblemData data) : data_(std::move(data)) {
    const auto report = validate(data_);
    if (!report.valid) {
      std::string msg = data_.name.empty() ? std::string("instance") : data_.name;
      for (const auto& e : report.errors) msg += "; " + e;
      throw Error(ErrorCode::invalid_problem, msg);
    }
    rank_ = report.rank;
  }

  PositiveLP(Matrix A, Vector b, Vector c, Vector d, std::string name = {})
      : PositiveLP(ProblemData{std::move(A), std::move(b), std::move(c), std::move(d), std::move(name)}) {}

  const Matrix& A() const noexcept { return data_.A; }
  const Vector& b() const noexcept { return data_.b; }
  const Vector& c() const noexcept { return data_.c; }
  const Vector& d() const noexcept { return data_.d; }
  const std::string& name() const noexcept { return data_.name; }
  const ProblemData& data() const noexcept { return data_; }

  Index rows() const noexcept { return data_.A.rows(); }
  Index cols() const noexcept { return data_.A.cols(); }
  Index rank() const noexcept { return rank_; }

  /// Same instance with a different reactivity vector.
  PositiveLP with_reactivity(Vector d) const {
    ProblemData copy = data_;
    copy.d = std::move(d);
    return PositiveLP(std::move(copy));
  }

  friend bool operator==(const PositiveLP& x, const PositiveLP& y) {
    return x.data_.name == y.data_.name && x.data_.A == y.data_.A && x.data_.b == y.data_.b &&
           x.data_.c == y.data_.c && x.data_.d == y.data_.d;
  }

 private:
  ProblemData data_;
  Index rank_ = 0;
};

// ---------------------------------------------------------------------------
// States

/// x_i counts as zero iff x_i <= 1e-12 * max(1, |x|_inf).
inline double zero_threshold(const Vector& x) { return 1e-12 * std::max(1.0, inf_norm(x)); }

/// Indices of the entries above the zero threshold.
inline IndexList support_of(const Vector& v) {
  IndexList s;
  const double thr = zero_threshold(v);
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) > thr) s.push_back(i);
  }
  return s;
}

/// Nonnegative state with its support. Entries at or below the zero threshold
/// are stored as exact zeros.
class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(Vector x) : x_(std::move(x)) {
    if (!x_.allFinite()) throw Error(ErrorCode::numerical_failure, "state has non-finite entries");
    const double thr = zero_threshold(x_);
    support_.clear();
    for (Index i = 0; i < x_.size(); ++i) {
      if (x_(i) < -thr) {
        throw Error(ErrorCode::invalid_argument, "state has negative entry x_" + std::to_string(i + 1));
      }
      if (x_(i) <= thr) {
        x_(i) = 0.0;
      } else {
        support_.push_back(i);
      }
    }
  }

  const Vector& x() const noexcept { return x_; }
  const IndexList& support() const noexcept { return support_; }
  Index size() const noexcept { return x_.size(); }
  double operator[](Index i) const { return x_(i); }

  bool in_support(Index i) const { return std::binary_search(support_.begin(), support_.end(), i); }

  /// x in G (strictly positive everywhere).
  bool interior() const noexcept { return static_cast<Index>(support_.size()) == x_.size(); }

  /// x in G* relative to the index set I: positive on every i in I.
  bool positive_on(const IndexList& indices) const {
    return std::all_of(indices.begin(), indices.end(), [this](Index i) { return in_support(i); });
  }

 private:
  Vector x_;
  IndexList support_;
};

// ---------------------------------------------------------------------------
// Reactivity policies

enum class ReactivityPolicy { uniform, diag_cost };

inline Vector reactivity(const Vector& c, ReactivityPolicy policy) {
  switch (policy) {
    case ReactivityPolicy::uniform: return Vector::Ones(c.size());
    case ReactivityPolicy::diag_cost: return c;
  }
  return Vector::Ones(c.size());
}

// ---------------------------------------------------------------------------
// Graph builders

struct Arc {
  Index tail;
  Index head;
  double cost;
};

struct Digraph {
  Index num_nodes = 0;
  std::vector<Arc> arcs;
};

/// Node-arc incidence LP: column j has +1 at the tail and -1 at the head of
/// arc j, b = demands (positive at sources), c = arc costs. Every node keeps
/// its row, so A has one redundant row on a connected graph.
inline PositiveLP build_incidence_lp(const Digraph& g, const Vector& demands, const Vector& d,
                                     std::string name = "incidence") {
  if (g.num_nodes < 1 || g.arcs.empty()) throw Error(ErrorCode::invalid_argument, "graph needs nodes and arcs");
  if (demands.size() != g.num_nodes) {
    throw Error(ErrorCode::dimension_mismatch, "demand vector length differs from node count");
  }
  const double total = demands.sum();
  if (std::abs(total) > 1e-12 * std::max(1.0, one_norm(demands))) {
    throw Error(ErrorCode::unbalanced_demands, "demands sum to " + std::to_string(total));
  }
  const auto m = static_cast<Index>(g.arcs.size());
  Matrix A = Matrix::Zero(g.num_nodes, m);
  Vector c(m);
  for (Index j = 0; j < m; ++j) {
    const Arc& a = g.arcs[static_cast<std::size_t>(j)];
    if (a.tail < 0 || a.tail >= g.num_nodes || a.head < 0 || a.head >= g.num_nodes || a.tail == a.head) {
      throw Error(ErrorCode::invalid_argument, "arc " + std::to_string(j + 1) + " has invalid endpoints");
    }
    if (!(a.cost > 0.0)) {
      throw Error(ErrorCode::nonpositive_cost, "arc " + std::to_string(j + 1) + " has cost " + std::to_string(a.cost));
    }
    A(a.tail, j) = 1.0;
    A(a.head, j) = -1.0;
    c(j) = a.cost;
  }
  return PositiveLP(std::move(A), demands, std::move(c), d, std::move(name));
}

inline PositiveLP build_incidence_lp(const Digraph& g, const Vector& demands, ReactivityPolicy policy,
                                     std::string name = "incidence") {
  Vector c(static_cast<Index>(g.arcs.size()));
  for (std::size_t j = 0; j < g.arcs.size(); ++j) c(static_cast<Index>(j)) = g.arcs[j].cost;
  return build_incidence_lp(g, demands, reactivity(c, policy), std::move(name));
}

// ---------------------------------------------------------------------------
// Built-in instances

/// minimize x1 + 2 x2  s.t.  x1 + x2 = 1, x >= 0. Optimum (1, 0).
inline PositiveLP fig1_instance(const Vector& d = Vector::Ones(2)) {
  Matrix A(1, 2);
  A << 1.0, 1.0;
  return PositiveLP(A, Vector::Ones(1), Vector{{1.0, 2.0}}, d, "fig1");
}

/// Two parallel edges with costs c, unit demand: the planar family of the
/// entry-angle study.
inline PositiveLP parallel_edges_instance(const Vector& c, const Vector& d) {
  Matrix A(1, 2);
  A << 1.0, 1.0;
  return PositiveLP(A, Vector::Ones(1), c, d, "parallel-edges");
}

/// Unit-demand network with two arc-disjoint s-t paths. Arcs 0..3 form the
/// optimal path with costs (f, f, f, f-1), total 4f-1; arcs 4..7 form the
/// alternative with costs (f+1, f, f, f), total 4f+1. Requires f >= 2 so
/// every cost is positive. Nodes: s = 0, optimal path 1..3, alternative 4..6,
/// t = 7.
inline Digraph ladder_graph(int f) {
  if (f < 2) throw Error(ErrorCode::invalid_argument, "ladder family requires f >= 2 (f = 1 gives a zero-cost arc)");
  const double F = f;
  Digraph g;
  g.num_nodes = 8;
  g.arcs = {{0, 1, F}, {1, 2, F}, {2, 3, F}, {3, 7, F - 1},
            {0, 4, F + 1}, {4, 5, F}, {5, 6, F}, {6, 7, F}};
  return g;
}

inline IndexList ladder_optimal_arcs() { return {0, 1, 2, 3}; }

inline double ladder_optimum(int f) { return 4.0 * f - 1.0; }

inline PositiveLP ladder_family(int f, ReactivityPolicy policy = ReactivityPolicy::uniform) {
  const Digraph g = ladder_graph(f);
  Vector demands = Vector::Zero(g.num_nodes);
  demands(0) = 1.0;
  demands(7) = -1.0;
  return build_incidence_lp(g, demands, policy, "ladder-" + std::to_string(f));
}

/// Starting point of the reactivity comparison: 1/100 on the optimal arcs,
/// 100 on every other arc.
inline Vector ladder_initial_state() {
  Vector x = Vector::Constant(8, 100.0);
  for (Index i : ladder_optimal_arcs()) x(i) = 0.01;
  return x;
}

}  // namespace physarum
