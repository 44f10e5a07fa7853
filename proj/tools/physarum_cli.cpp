// physarum: run the directed Physarum dynamics on positive LPs and emit CSVs.
//
//   physarum solve     --builtin fig1|ladder|random | --problem FILE  [options]
//   physarum compare   [--f F]... [--epsilon E]
//   physarum flowfield --builtin fig1 [--d D1,D2]
//   physarum slope     [--c C1,C2] [--d D1,D2] [--random N --seed S]
//   physarum validate  --problem FILE
//
// Exit codes: 0 converged / ok, 1 invalid input or infeasible, 2 iteration cap.

#include "physarum/physarum.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace physarum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCap = 2;

struct RunConfig {
  std::string builtin;
  std::string problem;
  std::string d_policy;
  std::string d_csv;
  std::string c_csv;
  std::string x0_csv;
  std::optional<double> h;
  double epsilon = 0.1;
  std::optional<long> max_steps;
  std::string out = ".";
  unsigned long long seed = 1;
  std::vector<int> f;
  long record_every = 1;
  int grid = 21;
  int random_pairs = 0;
};

Vector parse_csv_vector(const std::string& text, const char* flag) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, std::string(flag) + ": cannot parse '" + tok + "'");
    }
  }
  if (vals.empty()) throw Error(ErrorCode::invalid_argument, std::string(flag) + ": empty list");
  return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

std::string vector_label(const Vector& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) s += (i ? "_" : "") + format_number(v(i));
  return s;
}

PositiveLP load_problem(const RunConfig& cfg) {
  if (!cfg.problem.empty() && !cfg.builtin.empty()) {
    throw Error(ErrorCode::invalid_argument, "--problem and --builtin are mutually exclusive");
  }
  std::optional<PositiveLP> lp;
  if (!cfg.problem.empty()) {
    lp = read_problem(cfg.problem);
  } else if (cfg.builtin == "fig1") {
    lp = fig1_instance();
  } else if (cfg.builtin == "ladder") {
    const int f = cfg.f.empty() ? 10 : cfg.f.front();
    lp = ladder_family(f);
  } else if (cfg.builtin == "random") {
    Rng rng(cfg.seed);
    lp = random_planted_instance(rng, {}, "random-" + std::to_string(cfg.seed));
  } else if (cfg.builtin.empty()) {
    throw Error(ErrorCode::invalid_argument, "one of --builtin or --problem is required");
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown built-in '" + cfg.builtin + "' (fig1, ladder, random)");
  }
  if (!cfg.d_csv.empty()) {
    lp = lp->with_reactivity(parse_csv_vector(cfg.d_csv, "--d"));
  } else if (cfg.d_policy == "diag-cost") {
    lp = lp->with_reactivity(reactivity(lp->c(), ReactivityPolicy::diag_cost));
  } else if (cfg.d_policy == "uniform") {
    lp = lp->with_reactivity(reactivity(lp->c(), ReactivityPolicy::uniform));
  } else if (!cfg.d_policy.empty()) {
    throw Error(ErrorCode::invalid_argument, "unknown --d-policy '" + cfg.d_policy + "'");
  }
  return *lp;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::invalid_argument, "output directory '" + dir + "' is not usable");
}

int cmd_solve(const RunConfig& cfg) {
  const PositiveLP lp = load_problem(cfg);
  ensure_out_dir(cfg.out);

  std::optional<OracleResult> oracle;
  try {
    oracle = solve_exhaustive(lp);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::too_large) throw;
    std::cout << "oracle: skipped (" << e.what() << ")\n";
  }
  if (oracle && !oracle->feasible) {
    std::cout << "oracle: infeasible instance\n";
    return kExitInvalid;
  }

  Vector x0 = cfg.x0_csv.empty() ? Vector(Vector::Ones(lp.cols())) : parse_csv_vector(cfg.x0_csv, "--x0");
  if (x0.size() != lp.cols()) throw Error(ErrorCode::dimension_mismatch, "--x0 length differs from m");

  IntegratorConfig icfg = IntegratorConfig::defaults_for(lp, cfg.epsilon);
  if (cfg.h) icfg.h = *cfg.h;
  icfg.max_steps = cfg.max_steps.value_or(1'000'000);
  icfg.record_every = cfg.record_every;
  if (oracle) icfg.xstar = oracle->xstar_interior;

  const Trajectory traj = integrate(lp, StateVector(x0), icfg);
  for (const auto& w : traj.warnings) std::cout << "warning: " << w << '\n';

  std::optional<lyapunov::AuditReport> audit;
  if (oracle) audit = lyapunov::monotonicity_audit(traj, lp, oracle->xstar_interior);

  csv::write_file_atomically(fs::path(cfg.out) / "trajectory.csv",
                             [&](std::ostream& out) { csv::write_trajectory(out, traj, audit ? &*audit : nullptr); });
  if (audit) {
    csv::write_file_atomically(fs::path(cfg.out) / "audit.txt",
                               [&](std::ostream& out) { out << lyapunov::format_audit(*audit); });
  }

  const Monitor& fin = traj.final_monitor();
  std::cout << "instance      " << lp.name() << " (n=" << lp.rows() << ", m=" << lp.cols() << ")\n"
            << "h             " << csv::real(traj.h) << '\n'
            << "steps         " << traj.steps_taken << '\n'
            << "final c^T x   " << csv::real(fin.ctx) << '\n'
            << "residual      " << csv::real(fin.residual_inf) << '\n';
  if (oracle) {
    std::cout << "oracle value  " << csv::real(oracle->optimal_value) << '\n'
              << "oracle gap    " << csv::real(fin.ctx - oracle->optimal_value) << '\n'
              << "audit         " << (audit->passed() ? "pass" : "fail") << '\n';
  }
  std::cout << "status        " << (traj.converged() ? "converged" : "iteration cap reached") << '\n';
  return traj.converged() ? kExitOk : kExitCap;
}

int cmd_compare(const RunConfig& cfg) {
  ensure_out_dir(cfg.out);
  const std::vector<int> fs_list = cfg.f.empty() ? std::vector<int>{10, 50, 100} : cfg.f;
  std::vector<experiments::ComparisonRow> rows;
  for (int f : fs_list) {
    auto cell = [&](ReactivityPolicy p) {
      double cap_factor = 400.0;
      if (cfg.max_steps) {
        const PositiveLP lp = ladder_family(f, p);
        const double c1 = one_norm(lp.c());
        cap_factor = static_cast<double>(*cfg.max_steps) /
                     static_cast<double>(IntegratorConfig::iteration_budget(c1, 1.0 / (2.0 * c1), cfg.epsilon));
      }
      return experiments::run_comparison_cell(f, p, cfg.epsilon, cap_factor);
    };
    rows.push_back({cell(ReactivityPolicy::diag_cost), cell(ReactivityPolicy::uniform)});
  }
  csv::write_file_atomically(fs::path(cfg.out) / "compare.csv",
                             [&](std::ostream& out) { experiments::write_comparison(out, rows); });
  experiments::write_comparison(std::cout, rows);
  return kExitOk;
}

const std::vector<Vector>& fig1_starts() {
  static const std::vector<Vector> starts = {
      Vector{{0.5, 0.5}}, Vector{{0.2, 0.2}}, Vector{{1.5, 1.5}}, Vector{{0.1, 1.2}},
      Vector{{1.2, 0.1}}, Vector{{0.8, 0.6}}, Vector{{0.3, 1.8}}, Vector{{2.0, 0.5}},
  };
  return starts;
}

int cmd_flowfield(const RunConfig& cfg) {
  RunConfig base = cfg;
  if (base.builtin.empty() && base.problem.empty()) base.builtin = "fig1";
  ensure_out_dir(cfg.out);
  std::vector<Vector> settings;
  if (!cfg.d_csv.empty()) {
    settings.push_back(parse_csv_vector(cfg.d_csv, "--d"));
  } else {
    settings = {Vector{{5.0, 1.0}}, Vector{{1.0, 1.0}}, Vector{{1.0, 5.0}}};
  }
  for (const Vector& d : settings) {
    RunConfig one = base;
    one.d_csv.clear();
    one.d_policy.clear();
    const PositiveLP lp = load_problem(one).with_reactivity(d);
    if (lp.cols() != 2) throw Error(ErrorCode::wrong_dimension, "flowfield needs a two-variable instance");
    const std::string tag = "d" + vector_label(d);

    Grid grid;
    grid.n1 = grid.n2 = cfg.grid;
    grid.x1_max = grid.x2_max = 2.0;
    const auto field = flow_field(lp, grid);
    csv::write_file_atomically(fs::path(cfg.out) / ("field_" + tag + ".csv"),
                               [&](std::ostream& out) { csv::write_field(out, field); });

    const OracleResult oracle = solve_exhaustive(lp);
    for (std::size_t k = 0; k < fig1_starts().size(); ++k) {
      IntegratorConfig icfg = IntegratorConfig::defaults_for(lp, cfg.epsilon);
      if (cfg.h) icfg.h = *cfg.h;
      icfg.max_steps = cfg.max_steps.value_or(100'000);
      icfg.record_every = cfg.record_every;
      icfg.xstar = oracle.xstar_interior;
      const Trajectory traj = integrate(lp, StateVector(fig1_starts()[k]), icfg);
      csv::write_file_atomically(fs::path(cfg.out) / ("traj_" + tag + "_" + std::to_string(k + 1) + ".csv"),
                                 [&](std::ostream& out) { csv::write_trajectory(out, traj); });
    }

    // Predicted entry line through the optimal vertex, when the c ordering allows it.
    csv::write_file_atomically(fs::path(cfg.out) / ("entry_" + tag + ".csv"), [&](std::ostream& out) {
      out << "x1,x2,regime,slope\n";
      if (!(lp.c()(1) > lp.c()(0))) return;
      const auto pred = analysis::predict_entry(lp.c(), d);
      const std::string regime(analysis::to_string(pred.regime));
      for (int i = 0; i <= 10; ++i) {
        const double x1 = 1.0 - 0.05 * i;
        const double x2 = pred.regime == analysis::Regime::sloped ? pred.slope * (x1 - 1.0) : 0.0;
        out << csv::real(x1) << ',' << csv::real(x2) << ',' << regime << ',' << csv::real(pred.slope) << '\n';
      }
    });
    std::cout << "wrote field_" << tag << ".csv, traj_" << tag << "_*.csv, entry_" << tag << ".csv\n";
  }
  return kExitOk;
}

int cmd_slope(const RunConfig& cfg) {
  ensure_out_dir(cfg.out);
  struct Pair {
    Vector c, d;
  };
  std::vector<Pair> pairs;
  const Vector c = cfg.c_csv.empty() ? Vector{{1.0, 2.0}} : parse_csv_vector(cfg.c_csv, "--c");
  if (cfg.random_pairs > 0) {
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> ratio(1.1, 10.0), unit(0.5, 2.0), margin(1.5, 5.0);
    for (int k = 0; k < cfg.random_pairs; ++k) {
      const double c1 = unit(rng);
      const Vector cc{{c1, c1 * ratio(rng)}};
      const double d2 = unit(rng);
      const double r2 = (cc(1) - cc(0)) * d2 / cc(1);
      pairs.push_back({cc, Vector{{r2 * margin(rng), d2}}});
    }
  } else if (!cfg.d_csv.empty()) {
    pairs.push_back({c, parse_csv_vector(cfg.d_csv, "--d")});
  } else {
    for (const Vector& d : {Vector{{5.0, 1.0}}, Vector{{1.0, 1.0}}, Vector{{1.0, 5.0}}}) pairs.push_back({c, d});
  }
  const Vector x0 = cfg.x0_csv.empty() ? Vector{{0.5, 0.5}} : parse_csv_vector(cfg.x0_csv, "--x0");

  std::ostringstream table;
  table << "c1,c2,d1,d2,predicted_regime,predicted_slope,measured_regime,measured_slope,rel_error\n";
  for (const auto& p : pairs) {
    const auto run = analysis::run_slope_study(p.c, p.d, x0, cfg.h.value_or(0.0));
    const double rel = run.predicted.regime == analysis::Regime::sloped && run.measured.regime == analysis::Regime::sloped
                           ? std::abs(run.measured.slope - run.predicted.slope) / std::abs(run.predicted.slope)
                           : std::numeric_limits<double>::quiet_NaN();
    table << csv::real(p.c(0)) << ',' << csv::real(p.c(1)) << ',' << csv::real(p.d(0)) << ',' << csv::real(p.d(1)) << ','
          << analysis::to_string(run.predicted.regime) << ',' << csv::real(run.predicted.slope) << ','
          << analysis::to_string(run.measured.regime) << ',' << csv::real(run.measured.slope) << ',' << csv::real(rel)
          << '\n';
  }
  csv::write_file_atomically(fs::path(cfg.out) / "slope.csv", [&](std::ostream& out) { out << table.str(); });
  std::cout << table.str();
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg) {
  if (cfg.problem.empty()) throw Error(ErrorCode::invalid_argument, "--problem is required");
  // Structural parse errors surface as exceptions; semantic ones are reported.
  std::ifstream in(cfg.problem);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + cfg.problem + "'");
  try {
    const PositiveLP lp = read_problem(cfg.problem);
    const auto report = validate(lp.data());
    std::cout << "valid (n=" << report.rows << ", m=" << report.cols << ", rank " << report.rank << ")\n";
    for (const auto& note : report.notes) std::cout << "note: " << note << '\n';
    return kExitOk;
  } catch (const Error& e) {
    std::cout << "invalid: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed Physarum dynamics for positive linear programs"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--builtin", cfg.builtin, "built-in instance: fig1, ladder, random");
    sub->add_option("--problem", cfg.problem, "problem file (physarum-lp v1)");
    sub->add_option("--d-policy", cfg.d_policy, "reactivity policy")->check(CLI::IsMember({"uniform", "diag-cost"}));
    sub->add_option("--d", cfg.d_csv, "explicit reactivity vector, comma separated");
    sub->add_option("--h", cfg.h, "Euler step size");
    sub->add_option("--epsilon", cfg.epsilon, "target accuracy");
    sub->add_option("--max-steps", cfg.max_steps, "iteration cap");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for random instances");
    sub->add_option("--f", cfg.f, "ladder family parameter (repeatable for compare)");
    sub->add_option("--record-every", cfg.record_every, "trajectory thinning stride")->check(CLI::PositiveNumber);
    sub->add_option("--x0", cfg.x0_csv, "initial state, comma separated");
  };

  auto* solve = app.add_subcommand("solve", "integrate the dynamics and audit the Lyapunov function");
  add_common(solve);
  auto* compare = app.add_subcommand("compare", "steps-to-threshold for D = diag(c) vs D = I on the ladder family");
  add_common(compare);
  auto* flowfield = app.add_subcommand("flowfield", "vector field and trajectories of a two-variable instance");
  add_common(flowfield);
  flowfield->add_option("--grid", cfg.grid, "grid points per axis")->check(CLI::Range(2, 1000));
  auto* slope = app.add_subcommand("slope", "predicted vs measured entry slope at the optimal vertex");
  add_common(slope);
  slope->add_option("--c", cfg.c_csv, "costs c1,c2 with c2 > c1");
  slope->add_option("--random", cfg.random_pairs, "number of random sloped-regime (c, d) pairs");
  auto* validate_cmd = app.add_subcommand("validate", "check a problem file");
  add_common(validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*compare) return cmd_compare(cfg);
    if (*flowfield) return cmd_flowfield(cfg);
    if (*slope) return cmd_slope(cfg);
    if (*validate_cmd) return cmd_validate(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
