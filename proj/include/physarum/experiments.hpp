#pragma once

// Reactivity comparison on the ladder family: D = diag(c) against D = I from
// the start 1/100 on the optimal arcs, 100 elsewhere.

#include "physarum/csv.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/problem.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

namespace physarum::experiments {

struct ComparisonCell {
  int f = 0;
  ReactivityPolicy policy = ReactivityPolicy::uniform;
  double optimum = 0.0;
  double h = 0.0;
  long budget = 0;  ///< ceil((1/h) ln(|c|_1 / epsilon))
  long cap = 0;
  std::optional<long> steps;  ///< first step with |c^T x - optimum| <= epsilon

  bool within_budget() const noexcept { return steps && *steps <= budget; }
};

/// Steps-to-threshold for one (f, D) cell. The run continues past the
/// budget up to cap_factor * budget so slow cells still get a count.
inline ComparisonCell run_comparison_cell(int f, ReactivityPolicy policy, double epsilon = 0.1,
                                          double cap_factor = 400.0) {
  const PositiveLP lp = ladder_family(f, policy);
  ComparisonCell cell;
  cell.f = f;
  cell.policy = policy;
  cell.optimum = ladder_optimum(f);
  const double c1 = one_norm(lp.c());
  cell.h = 1.0 / (2.0 * c1);
  cell.budget = IntegratorConfig::iteration_budget(c1, cell.h, epsilon);
  cell.cap = static_cast<long>(std::ceil(cap_factor * static_cast<double>(cell.budget)));
  const double target = cell.optimum;
  cell.steps = steps_until(lp, StateVector(ladder_initial_state()), cell.h, cell.cap,
                           [target, epsilon](double ctx, const StateVector&) { return std::abs(ctx - target) <= epsilon; });
  return cell;
}

struct ComparisonRow {
  ComparisonCell diag_cost;
  ComparisonCell identity;

  /// diag(c) reached the threshold no later than I (I not reaching it within
  /// its cap counts as slower).
  bool diag_not_slower() const {
    if (!diag_cost.steps) return false;
    return !identity.steps || *diag_cost.steps <= *identity.steps;
  }
};

inline std::vector<ComparisonRow> run_comparison(const std::vector<int>& fs, double epsilon = 0.1,
                                                 double cap_factor = 400.0) {
  std::vector<ComparisonRow> rows;
  for (int f : fs) {
    rows.push_back({run_comparison_cell(f, ReactivityPolicy::diag_cost, epsilon, cap_factor),
                    run_comparison_cell(f, ReactivityPolicy::uniform, epsilon, cap_factor)});
  }
  return rows;
}

inline void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  auto steps = [](const ComparisonCell& c) { return c.steps ? std::to_string(*c.steps) : std::string("NA"); };
  out << "f,optimum,h,budget,cap,steps_diag_cost,steps_identity,diag_within_budget,identity_within_budget,"
         "diag_not_slower\n";
  for (const auto& r : rows) {
    out << r.diag_cost.f << ',' << csv::real(r.diag_cost.optimum) << ',' << csv::real(r.diag_cost.h) << ','
        << r.diag_cost.budget << ',' << r.diag_cost.cap << ',' << steps(r.diag_cost) << ',' << steps(r.identity) << ','
        << (r.diag_cost.within_budget() ? 1 : 0) << ',' << (r.identity.within_budget() ? 1 : 0) << ','
        << (r.diag_not_slower() ? 1 : 0) << '\n';
  }
}

}  // namespace physarum::experiments
