#include "physarum/dynamics.hpp"
#include "physarum/lyapunov.hpp"
#include "physarum/lyapunov_audit.hpp"
#include "physarum/oracle.hpp"
#include "physarum/random_instances.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace physarum;
namespace ly = physarum::lyapunov;

namespace {

// dV/dt along the flow by a central difference of V in the direction f(x).
double directional_vdot(const PositiveLP& lp, const Vector& x, const Vector& xstar) {
  const Vector f = rhs(lp, StateVector(x));
  const double tau = 1e-6 * std::max(1.0, inf_norm(x)) / std::max(1.0, inf_norm(f));
  return (ly::value(lp, x + tau * f, xstar) - ly::value(lp, x - tau * f, xstar)) / (2.0 * tau);
}

Trajectory fig1_run(double h, const Vector& d = Vector::Ones(2)) {
  const PositiveLP lp = fig1_instance(d);
  IntegratorConfig cfg = IntegratorConfig::defaults_for(lp);
  cfg.h = h;
  cfg.max_steps = 200000;
  cfg.xstar = Vector{{1.0, 0.0}};
  return integrate(lp, StateVector(Vector{{0.5, 0.5}}), cfg);
}

}  // namespace

TEST_CASE("V on fig1", "[lyapunov]") {
  const PositiveLP lp = fig1_instance();
  const Vector xs{{1.0, 0.0}};
  CHECK(ly::value(lp, Vector{{1.0, 1.0}}, xs) == Catch::Approx(6.0).epsilon(1e-14));
  CHECK(ly::value(lp, Vector{{1.0, 0.5}}, xs) == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(ly::value(lp, Vector{{1.0, 0.0}}, xs) == Catch::Approx(2.0).epsilon(1e-14));
  try {
    ly::value(lp, Vector{{0.0, 1.0}}, xs);
    FAIL("expected boundary contact");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::boundary_contact);
  }
}

TEST_CASE("V' on fig1", "[lyapunov]") {
  const Vector xs{{1.0, 0.0}};
  const StateVector x(Vector{{1.0, 1.0}});
  const auto r11 = ly::derivative(fig1_instance(), x, xs);
  CHECK(r11.ctq == Catch::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(r11.btp == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(r11.vdot == Catch::Approx(-3.0).epsilon(1e-14));
  CHECK(r11.chain_holds());

  const auto r51 = ly::derivative(fig1_instance(Vector{{5.0, 1.0}}), x, xs);
  CHECK(r51.vdot == r11.vdot);

  const auto at_opt = ly::derivative(fig1_instance(), StateVector(xs), xs);
  CHECK(at_opt.vdot == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("closed-form V' matches the directional derivative", "[lyapunov][property]") {
  Rng rng(51);
  int checked = 0;
  while (checked < 200) {
    const PositiveLP lp = random_planted_instance(rng);
    const Vector xs = solve_exhaustive(lp).xstar_interior;
    for (int k = 0; k < 20; ++k, ++checked) {
      const Vector x = random_positive_vector(rng, lp.cols(), 0.1, 10.0);
      const double analytic = ly::derivative(lp, StateVector(x), xs).vdot;
      const double numeric = directional_vdot(lp, x, xs);
      CHECK(std::abs(analytic - numeric) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("V' is bounded by c^T x* - c^T x and the chain holds", "[lyapunov][property]") {
  Rng rng(53);
  for (int inst = 0; inst < 10; ++inst) {
    const PositiveLP lp = random_planted_instance(rng);
    const OracleResult oracle = solve_exhaustive(lp);
    for (int k = 0; k < 500; ++k) {
      const Vector x = random_state_on(rng, lp.cols(), oracle.I);
      const auto r = ly::derivative(lp, StateVector(x), oracle.xstar_interior);
      const double tol = 1e-9 * std::max({1.0, r.ctx, r.btp});
      CHECK(r.vdot <= r.ctxstar - r.ctx + tol);
      if (r.ctx >= r.ctxstar) CHECK(r.vdot <= 1e-8);
      CHECK(r.chain_holds(1e-9));
    }
  }
}

TEST_CASE("V' can be positive below the optimal cost", "[lyapunov]") {
  // x = (1/sqrt 2, 1e-3) on fig1: c^T x < 1 and V' > 0.
  const auto r = ly::derivative(fig1_instance(), StateVector(Vector{{std::sqrt(0.5), 1e-3}}), Vector{{1.0, 0.0}});
  CHECK(r.ctx < r.ctxstar);
  CHECK(r.vdot > 0.1);
}

TEST_CASE("barrier W", "[lyapunov]") {
  const PositiveLP lp = fig1_instance();
  const Vector y{{1.0, 0.0}};
  CHECK(ly::barrier(lp, Vector{{std::exp(1.0), 1.0}}, y) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(ly::barrier(lp, Vector{{1.0, 7.0}}, y) == 0.0);

  const Trajectory t = fig1_run(1.0 / 6.0);
  CHECK(ly::barrier_min_slope(t, lp, y) >= -lp.c().dot(y) - 1e-3);
}

TEST_CASE("audit on fig1 and the ladder", "[lyapunov]") {
  const Vector xs{{1.0, 0.0}};
  for (const Vector& d : {Vector{{1.0, 1.0}}, Vector{{5.0, 1.0}}, Vector{{1.0, 5.0}}}) {
    const double h = std::min(1.0 / 6.0, 1.0 / d.maxCoeff());
    const Trajectory t = fig1_run(h, d);
    REQUIRE(t.converged());
    const auto a = ly::monotonicity_audit(t, fig1_instance(d), xs);
    CHECK(a.monotone_violations == 0);
    CHECK(a.passed());
  }

  // Zero violations even with the fixed tolerance 1e-3 at h = 1/6.
  const auto strict = ly::monotonicity_audit(fig1_run(1.0 / 6.0), fig1_instance(), xs);
  CHECK(strict.max_increase <= 1e-3);

  IntegratorConfig cfg = IntegratorConfig::defaults_for(fig1_instance());
  cfg.xstar = xs;
  cfg.max_steps = 10;
  const Trajectory at_opt = integrate(fig1_instance(), StateVector(xs), cfg);
  const auto a0 = ly::monotonicity_audit(at_opt, fig1_instance(), xs);
  CHECK(a0.final_vdot == 0.0);
  CHECK(a0.V.front() == a0.V.back());

  const PositiveLP ladder = ladder_family(10, ReactivityPolicy::diag_cost);
  IntegratorConfig lcfg = IntegratorConfig::defaults_for(ladder);
  lcfg.max_steps = 200000;
  lcfg.epsilon_gap = 1e-8;
  lcfg.xstar = solve_exhaustive(ladder).xstar_interior;
  const Trajectory lt = integrate(ladder, StateVector(ladder_initial_state()), lcfg);
  REQUIRE(lt.converged());
  const auto la = ly::monotonicity_audit(lt, ladder, *lcfg.xstar);
  INFO(ly::format_audit(la));
  CHECK(la.passed());
}

TEST_CASE("finite-difference error is first order in h", "[lyapunov]") {
  const PositiveLP lp = fig1_instance(Vector{{5.0, 1.0}});
  const Vector xs{{1.0, 0.0}};
  auto discrepancy = [&](double h) {
    IntegratorConfig cfg = IntegratorConfig::defaults_for(lp);
    cfg.h = h;
    cfg.xstar = xs;
    cfg.max_steps = static_cast<long>(std::round(2.0 / h));
    const Trajectory t = integrate(lp, StateVector(Vector{{0.5, 0.5}}), cfg);
    return ly::monotonicity_audit(t, lp, xs).max_fd_discrepancy;
  };
  const double coarse = discrepancy(0.02);
  const double fine = discrepancy(0.01);
  const double ratio = fine / coarse;
  INFO("coarse " << coarse << ", fine " << fine);
  CHECK(ratio >= 0.3);
  CHECK(ratio <= 0.7);
}

TEST_CASE("runs stay above the boundary floor", "[lyapunov][property]") {
  Rng rng(57);
  for (int inst = 0; inst < 10; ++inst) {
    const PositiveLP lp = random_planted_instance(rng);
    const OracleResult oracle = solve_exhaustive(lp);
    const double beta = subdeterminant_bound(lp).beta;
    const Vector x0 = random_positive_vector(rng, lp.cols());
    IntegratorConfig cfg = IntegratorConfig::defaults_for(lp);
    cfg.max_steps = 3000;
    cfg.xstar = oracle.xstar_interior;
    const Trajectory t = integrate(lp, StateVector(x0), cfg);
    const double floor = ly::boundary_log_floor(lp, x0, oracle.xstar_interior, beta);
    for (const Vector& x : t.states) {
      for (Index i : oracle.I) {
        REQUIRE(x(i) > 0.0);
        CHECK(std::log(1.0 / x(i)) <= floor);
      }
    }
    CHECK(t.protected_hits.empty());
  }
}
