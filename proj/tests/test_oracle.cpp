#include "physarum/energy.hpp"
#include "physarum/oracle.hpp"
#include "physarum/random_instances.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace physarum;

TEST_CASE("fig1 oracle", "[oracle]") {
  const OracleResult r = solve_exhaustive(fig1_instance());
  REQUIRE(r.feasible);
  CHECK(r.optimal_value == 1.0);
  REQUIRE(r.optimal_vertices.size() == 1);
  CHECK(r.optimal_vertices.front() == Vector{{1.0, 0.0}});
  CHECK(r.I == IndexList{0});
  CHECK(r.xstar_interior == Vector{{1.0, 0.0}});
}

TEST_CASE("tied costs give the relative interior", "[oracle]") {
  const PositiveLP lp(Matrix{{1.0, 1.0}}, Vector{{1.0}}, Vector{{1.0, 1.0}}, Vector{{1.0, 1.0}});
  const OracleResult r = solve_exhaustive(lp);
  CHECK(r.optimal_value == 1.0);
  CHECK(r.optimal_vertices.size() == 2);
  CHECK(r.I == IndexList{0, 1});
  CHECK(r.xstar_interior == Vector{{0.5, 0.5}});
}

TEST_CASE("ladder oracle", "[oracle]") {
  const OracleResult r = solve_exhaustive(ladder_family(10));
  CHECK(r.optimal_value == Catch::Approx(39.0).epsilon(1e-12));
  CHECK(r.I == ladder_optimal_arcs());
}

TEST_CASE("infeasible instance", "[oracle]") {
  const PositiveLP lp(Matrix{{1.0, 1.0}}, Vector{{-1.0}}, Vector{{1.0, 2.0}}, Vector{{1.0, 1.0}});
  CHECK_FALSE(solve_exhaustive(lp).feasible);
  CHECK_THROWS_AS(feasibility_distance(lp, Vector{{0.0, 0.0}}), Error);
}

TEST_CASE("oracle invariants on random instances", "[oracle][property]") {
  Rng rng(17);
  for (int k = 0; k < 40; ++k) {
    const PositiveLP lp = random_planted_instance(rng);
    const OracleResult r = solve_exhaustive(lp);
    REQUIRE(r.feasible);
    REQUIRE_FALSE(r.optimal_vertices.empty());
    IndexList I;
    for (const Vector& v : r.optimal_vertices) {
      CHECK(inf_norm(lp.A() * v - lp.b()) <= 1e-9 * std::max(1.0, inf_norm(lp.b())));
      CHECK(v.minCoeff() >= 0.0);
      CHECK(std::abs(lp.c().dot(v) - r.optimal_value) <= 1e-9 * std::max(1.0, std::abs(r.optimal_value)));
      for (Index i : support_of(v)) I.push_back(i);
    }
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    CHECK(I == r.I);
    CHECK(support_of(r.xstar_interior) == r.I);

    // Optimal points are fixed points of q.
    const EnergySolution s = min_energy_solution(lp, StateVector(r.xstar_interior));
    CHECK((s.q - r.xstar_interior).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, inf_norm(r.xstar_interior)));

    const OracleResult again = solve_exhaustive(lp);
    CHECK(again.optimal_vertices.size() == r.optimal_vertices.size());
    for (std::size_t j = 0; j < r.optimal_vertices.size(); ++j) {
      CHECK(again.optimal_vertices[j] == r.optimal_vertices[j]);
    }
  }
}

TEST_CASE("single-constraint simplex optimum", "[oracle][property]") {
  Rng rng(23);
  std::uniform_real_distribution<double> cost(0.5, 5.0);
  for (int k = 0; k < 20; ++k) {
    const Index m = 2 + k % 5;
    Vector c(m);
    for (Index i = 0; i < m; ++i) c(i) = cost(rng);
    const PositiveLP lp(Matrix::Ones(1, m), Vector{{1.0}}, c, Vector::Ones(m));
    CHECK(solve_exhaustive(lp).optimal_value == Catch::Approx(c.minCoeff()).epsilon(1e-12));
  }
}

TEST_CASE("feasibility distance", "[oracle]") {
  const PositiveLP lp = fig1_instance();
  CHECK(feasibility_distance(lp, Vector{{0.3, 0.7}}) == Catch::Approx(0.0).margin(1e-14));
  CHECK(feasibility_distance(lp, Vector{{0.0, 0.0}}) == Catch::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK(feasibility_distance(lp, Vector{{2.0, 0.0}}) == Catch::Approx(1.0).epsilon(1e-12));
  // Nearest point is the vertex (0,1): off the segment's affine projection.
  CHECK(feasibility_distance(lp, Vector{{-1.0, 3.0}}) == Catch::Approx(std::sqrt(1.0 + 4.0)).epsilon(1e-12));
}

TEST_CASE("enumeration guard", "[oracle]") {
  // C(60, 20) column subsets is far past the guard.
  Matrix A = Matrix::Zero(20, 60);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 60; ++j) A(i, j) = ((i * 7 + j * 13) % 5) + 1.0 * (i == j % 20);
  }
  const PositiveLP lp(A, A * Vector::Ones(60), Vector::Ones(60), Vector::Ones(60));
  try {
    solve_exhaustive(lp);
    FAIL("expected too_large");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_large);
  }
}
