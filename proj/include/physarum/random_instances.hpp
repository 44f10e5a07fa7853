#pragma once

// Seeded generators for property tests and random-instance suites.

#include "physarum/problem.hpp"

#include <cmath>
#include <random>
#include <string>

namespace physarum {

using Rng = std::mt19937_64;

struct RandomInstanceOptions {
  int max_rows = 4;
  int max_cols = 7;
  int entry_range = 2;  ///< A entries drawn from {-r, ..., r}
  double c_lo = 1.0, c_hi = 5.0;
  double d_lo = 0.5, d_hi = 2.0;
  double plant_lo = 0.5, plant_hi = 2.0;
};

/// Random integer A with no zero column, b = A x_plant for a random positive
/// x_plant, so the instance is feasible with a strictly positive solution.
inline PositiveLP random_planted_instance(Rng& rng, const RandomInstanceOptions& opt = {}, std::string name = "random") {
  std::uniform_int_distribution<int> rows_dist(1, opt.max_rows);
  const int n = rows_dist(rng);
  std::uniform_int_distribution<int> cols_dist(std::min(n + 1, opt.max_cols), opt.max_cols);
  const int m = cols_dist(rng);
  std::uniform_int_distribution<int> entry(-opt.entry_range, opt.entry_range);
  Matrix A(n, m);
  for (int j = 0; j < m; ++j) {
    do {
      for (int i = 0; i < n; ++i) A(i, j) = entry(rng);
    } while (A.col(j).cwiseAbs().maxCoeff() == 0.0);
  }
  std::uniform_real_distribution<double> plant(opt.plant_lo, opt.plant_hi);
  std::uniform_real_distribution<double> cost(opt.c_lo, opt.c_hi);
  std::uniform_real_distribution<double> react(opt.d_lo, opt.d_hi);
  Vector x(m), c(m), d(m);
  for (int j = 0; j < m; ++j) x(j) = plant(rng);
  for (int j = 0; j < m; ++j) c(j) = cost(rng);
  for (int j = 0; j < m; ++j) d(j) = react(rng);
  return PositiveLP(A, A * x, c, d, std::move(name));
}

/// Entries log-uniform in [lo, hi].
inline Vector random_positive_vector(Rng& rng, Index m, double lo = 1e-2, double hi = 1e2) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Vector x(m);
  for (Index i = 0; i < m; ++i) x(i) = std::exp(u(rng));
  return x;
}

/// A state in G*: positive on `keep`, each other coordinate zeroed with
/// probability `zero_prob`.
inline Vector random_state_on(Rng& rng, Index m, const IndexList& keep, double zero_prob = 0.3, double lo = 1e-2,
                              double hi = 1e2) {
  Vector x = random_positive_vector(rng, m, lo, hi);
  std::bernoulli_distribution drop(zero_prob);
  for (Index i = 0; i < m; ++i) {
    if (std::find(keep.begin(), keep.end(), i) == keep.end() && drop(rng)) x(i) = 0.0;
  }
  return x;
}

}  // namespace physarum
