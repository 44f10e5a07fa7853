// Minimal use of the library: the two-variable instance min x1 + 2 x2
// s.t. x1 + x2 = 1, integrated from (0.5, 0.5) with D = diag(5, 1).

#include "physarum/physarum.hpp"

#include <iostream>

int main() {
  using namespace physarum;
  const PositiveLP lp = fig1_instance(Vector{{5.0, 1.0}});

  const OracleResult oracle = solve_exhaustive(lp);
  IntegratorConfig cfg = IntegratorConfig::defaults_for(lp);
  cfg.max_steps = 100000;
  cfg.xstar = oracle.xstar_interior;

  const Trajectory traj = integrate(lp, StateVector(Vector{{0.5, 0.5}}), cfg);
  std::cout << "steps " << traj.steps_taken << ", c^T x = " << traj.final_monitor().ctx << ", optimum "
            << oracle.optimal_value << '\n';

  const auto pred = analysis::predict_entry(lp.c(), lp.d());
  const auto meas = analysis::run_slope_study(lp.c(), lp.d(), Vector{{0.5, 0.5}}).measured;
  std::cout << "entry regime " << analysis::to_string(pred.regime) << ", slope predicted " << pred.slope
            << ", measured " << meas.slope << '\n';
  return traj.converged() ? 0 : 1;
}
