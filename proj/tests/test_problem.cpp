#include "physarum/problem.hpp"
#include "physarum/problem_io.hpp"
#include "physarum/oracle.hpp"
#include "physarum/random_instances.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <functional>

using namespace physarum;
using Catch::Matchers::ContainsSubstring;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected physarum::Error");
  return ErrorCode::inconclusive;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("physarum_test_" + name)).string();
}

}  // namespace

TEST_CASE("validate reports rank and positivity", "[problem]") {
  const auto ok = validate({Matrix{{1.0, 1.0}}, Vector{{1.0}}, Vector{{1.0, 2.0}}, Vector{{1.0, 1.0}}, "fig1"});
  CHECK(ok.valid);
  CHECK(ok.rank == 1);

  const auto bad_cost = validate({Matrix{{1.0, 1.0}}, Vector{{1.0}}, Vector{{0.0, 1.0}}, Vector{{1.0, 1.0}}, ""});
  CHECK_FALSE(bad_cost.valid);
  REQUIRE_FALSE(bad_cost.errors.empty());
  CHECK_THAT(bad_cost.errors.front(), ContainsSubstring("cost not strictly positive"));

  const auto dup = validate({Matrix{{1.0, 1.0}, {1.0, 1.0}}, Vector{{1.0, 1.0}}, Vector{{1.0, 2.0}}, Vector{{1.0, 1.0}}, ""});
  CHECK(dup.valid);
  CHECK(dup.rank == 1);
  REQUIRE_FALSE(dup.notes.empty());
  CHECK_THAT(dup.notes.front(), ContainsSubstring("redundant rows"));

  const auto zero_col = validate({Matrix{{1.0, 0.0}}, Vector{{1.0}}, Vector{{1.0, 2.0}}, Vector{{1.0, 1.0}}, ""});
  CHECK_FALSE(zero_col.valid);
}

TEST_CASE("PositiveLP rejects invalid data at construction", "[problem]") {
  CHECK(code_of([] { PositiveLP(Matrix{{1.0, 1.0}}, Vector{{1.0}}, Vector{{1.0, 2.0}}, Vector{{1.0, -1.0}}); }) ==
        ErrorCode::invalid_problem);
  CHECK(code_of([] { PositiveLP(Matrix{{1.0, 1.0}}, Vector{{1.0}}, Vector{{1.0}}, Vector{{1.0, 1.0}}); }) ==
        ErrorCode::invalid_problem);
}

TEST_CASE("StateVector classifies support with the zero threshold", "[problem]") {
  const StateVector x(Vector{{2.0, 1e-13, 0.0, 3e-12}});
  CHECK(x.support() == IndexList{0, 3});
  CHECK(x[1] == 0.0);
  CHECK_THROWS_AS(StateVector(Vector{{1.0, -0.5}}), Error);
}

TEST_CASE("incidence builder: two parallel arcs", "[problem]") {
  const Digraph g{2, {{0, 1, 1.0}, {0, 1, 2.0}}};
  const PositiveLP lp = build_incidence_lp(g, Vector{{1.0, -1.0}}, ReactivityPolicy::uniform);
  CHECK(lp.A() == Matrix{{1.0, 1.0}, {-1.0, -1.0}});
  CHECK(lp.b() == Vector{{1.0, -1.0}});
  CHECK(lp.d() == Vector{{1.0, 1.0}});

  CHECK(code_of([&] { build_incidence_lp(g, Vector{{1.0, 0.0}}, ReactivityPolicy::uniform); }) ==
        ErrorCode::unbalanced_demands);
  CHECK(code_of([] {
          build_incidence_lp(Digraph{2, {{0, 1, 0.0}}}, Vector{{1.0, -1.0}}, ReactivityPolicy::uniform);
        }) == ErrorCode::nonpositive_cost);
}

// Every simple s-t path in a small digraph by DFS.
static double cheapest_path(const Digraph& g, Index s, Index t) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> seen(static_cast<std::size_t>(g.num_nodes), false);
  std::function<void(Index, double)> dfs = [&](Index v, double cost) {
    if (v == t) {
      best = std::min(best, cost);
      return;
    }
    seen[static_cast<std::size_t>(v)] = true;
    for (const Arc& a : g.arcs) {
      if (a.tail == v && !seen[static_cast<std::size_t>(a.head)]) dfs(a.head, cost + a.cost);
    }
    seen[static_cast<std::size_t>(v)] = false;
  };
  dfs(s, 0.0);
  return best;
}

TEST_CASE("triangle instance: oracle matches path enumeration", "[problem][oracle]") {
  const Digraph g{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}}};
  const PositiveLP lp = build_incidence_lp(g, Vector{{1.0, 0.0, -1.0}}, ReactivityPolicy::uniform);
  CHECK(lp.cols() == 3);
  const double paths = cheapest_path(g, 0, 2);
  CHECK(paths == 2.0);
  CHECK(solve_exhaustive(lp).optimal_value == Catch::Approx(paths).epsilon(1e-12));
}

TEST_CASE("incidence columns have one +1 and one -1", "[problem]") {
  for (int f = 2; f <= 6; ++f) {
    const PositiveLP lp = ladder_family(f);
    for (Index j = 0; j < lp.cols(); ++j) {
      const auto col = lp.A().col(j);
      CHECK(col.sum() == 0.0);
      CHECK((col.array() == 1.0).count() == 1);
      CHECK((col.array() == -1.0).count() == 1);
    }
  }
}

TEST_CASE("ladder family", "[problem][oracle]") {
  CHECK(code_of([] { ladder_family(1); }) == ErrorCode::invalid_argument);
  CHECK(ladder_optimum(10) == 39.0);

  for (int f = 2; f <= 20; ++f) {
    const OracleResult r = solve_exhaustive(ladder_family(f));
    CHECK(r.optimal_value == Catch::Approx(4.0 * f - 1.0).epsilon(1e-12));
  }
  const OracleResult r50 = solve_exhaustive(ladder_family(50));
  CHECK(r50.optimal_value == Catch::Approx(199.0));
  CHECK(r50.optimal_vertices.size() == 1);
  CHECK(r50.I == ladder_optimal_arcs());

  const PositiveLP diag = ladder_family(10, ReactivityPolicy::diag_cost);
  CHECK(diag.d() == diag.c());
}

TEST_CASE("problem file round trip", "[problem][io]") {
  const PositiveLP fig1 = fig1_instance(Vector{{5.0, 1.0}});
  const std::string text = format_problem(fig1);
  CHECK(parse_problem(text) == fig1);
  CHECK(format_problem(parse_problem(text)) == text);

  Rng rng(7);
  RandomInstanceOptions opt;
  for (int k = 0; k < 20; ++k) {
    const PositiveLP lp = random_planted_instance(rng, opt);
    const std::string path = temp_path("roundtrip.lp");
    write_problem(lp, path);
    CHECK(read_problem(path) == lp);
    std::filesystem::remove(path);
  }
}

TEST_CASE("problem file parsing errors", "[problem][io]") {
  const std::string wrong_costs = "physarum-lp v1\n1 3\n1 1 1\n1\n1 2\n1 1 1\n";
  CHECK(code_of([&] { parse_problem(wrong_costs); }) == ErrorCode::dimension_mismatch);

  const std::string negative_d = "physarum-lp v1\n1 2\n1 1\n1\n1 2\n1 -1\n";
  CHECK(code_of([&] { parse_problem(negative_d); }) == ErrorCode::invalid_problem);

  CHECK(code_of([] { parse_problem("physarum-lp v2\n1 2\n1 1\n1\n1 2\n1 1\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { parse_problem("physarum-lp v1\n1 2\n1 x\n1\n1 2\n1 1\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { parse_problem("physarum-lp v1\n1 2\n1 1\n1\n1 2\n"); }) == ErrorCode::parse_error);

  try {
    parse_problem("physarum-lp v1\n1 2\n1 1\n1\n1 zz\n1 1\n");
  } catch (const Error& e) {
    CHECK_THAT(e.what(), ContainsSubstring("line 5"));
  }

  const std::string commented = "physarum-lp v1\n# name: demo\n1 2   # dims\n1 1\n1\n1 2\n1 1\n";
  const PositiveLP lp = parse_problem(commented);
  CHECK(lp.name() == "demo");
  CHECK(lp.c() == Vector{{1.0, 2.0}});
}
