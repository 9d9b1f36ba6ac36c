#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rollplan/batch.hpp"
#include "rollplan/io.hpp"
#include "rollplan/retime.hpp"
#include "rollplan/rollplan.hpp"

namespace fs = std::filesystem;
using namespace rollplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTyped = 2;

struct TimeOverrides {
  std::optional<std::string> mode;
  std::optional<double> T, t_f, a, T_s;

  void add(CLI::App *app) {
    app->add_option("--time-mode", mode, "constant or smooth");
    app->add_option("--T", T, "constant time scale T [s]");
    app->add_option("--t-f", t_f, "simulation horizon [s]");
    app->add_option("--a", a, "smooth profile amplitude [rad/s]");
    app->add_option("--T-s", T_s, "smooth profile duration [s]");
  }

  bool any() const { return mode || T || t_f || a || T_s; }

  TimeScaleSpec apply(TimeScaleSpec s) const {
    if (mode) s.mode = time_mode_from_string(*mode);
    if (T) s.T_const = *T;
    if (t_f) s.t_f = *t_f;
    if (a) s.a = *a;
    if (T_s) s.T_s = *T_s;
    return s;
  }
};

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::string> variant;
  bool seedless = false;
  TimeOverrides time;

  void add(CLI::App *app, bool need_config = true) {
    auto *c = app->add_option("--config", config, "run configuration (JSON)");
    if (need_config) c->required();
    app->add_option("--out", out, "output directory");
    app->add_option("--variant", variant, "as_written or trig_corrected");
    app->add_flag("--seedless", seedless, "no-op; every run is deterministic");
    time.add(app);
  }

  RunConfig load() const {
    RunConfig c = load_config(config);
    if (variant) c.variant = variant_from_string(*variant);
    c.time = time.apply(c.time);
    return c;
  }
};

int status_exit(PlanStatus s) { return s == PlanStatus::converged ? kExitOk : kExitTyped; }

int cmd_plan(const Common &o) {
  const RunConfig cfg = o.load();
  const GoalSpec goal = cfg.goal();
  const PlanResult r = plan(goal, cfg.params());
  write_plan_outputs(o.out, r, goal);
  json line = plan_report_json(r, goal);
  line.erase("paths");
  std::cout << line.dump() << "\n";
  if (!r.converged) std::cerr << to_string(r.status) << ": " << r.message << "\n";
  return status_exit(r.status);
}

struct GridOptions {
  bool grid = false;
  int u_steps = 64;
  double v_fixed = 0.01;
  std::vector<double> psi{0.5, 1.5, 2.5};
  std::string csv;
};

int cmd_distance(const Common &o, const GridOptions &g) {
  double R_o = 0.5;
  AlphaForm form = kDefaultAlphaForm;
  std::optional<RunConfig> cfg;
  if (!o.config.empty()) {
    cfg = o.load();
    R_o = cfg->R_o;
    form = cfg->alpha_form;
  }
  if (g.grid) {
    if (g.u_steps < 2) throw ConfigError("--u-steps must be at least 2");
    std::vector<double> u;
    for (int i = 0; i < g.u_steps; ++i) u.push_back(kPi * i / (g.u_steps - 1));
    const std::string table = distance_surface_csv(distance_surface(u, g.v_fixed, g.psi, R_o, form));
    if (g.csv.empty())
      std::cout << table;
    else
      write_file(g.csv, table);
    return kExitOk;
  }
  if (!cfg) throw ConfigError("--config is required outside grid mode");
  const GoalSpec goal = cfg->goal();
  try {
    const DistanceReport r = min_distance(goal, R_o, form);
    json j = distance_json(r);
    j["alpha_form"] = to_string(form);
    j["travel"] = goal.travel();
    std::cout << j.dump(2) << "\n";
    return r.feasible || r.waived ? kExitOk : kExitTyped;
  } catch (const DomainError &e) {
    std::cout << json{{"error", "DomainError"}, {"message", e.what()}, {"alpha_form", to_string(form)}}.dump(2)
              << "\n";
    return kExitTyped;
  }
}

struct SimOptions {
  std::optional<double> zeta_q, zeta_u, R_q, R_u, psi_u;
  bool check_retime = false;
};

int cmd_simulate(const Common &o, const SimOptions &s) {
  const RunConfig base = load_config(o.config);
  RunConfig cfg = o.load();
  TuningState tune = cfg.tuning.value_or(TuningState{});
  if (!cfg.tuning) tune.R_q = cfg.R_q_init;
  if (s.zeta_q) tune.zeta_q = *s.zeta_q;
  if (s.zeta_u) tune.zeta_u = *s.zeta_u;
  if (s.R_q) tune.R_q = *s.R_q;
  if (s.R_u) tune.R_u = *s.R_u;
  if (s.psi_u) tune.psi_u = *s.psi_u;

  const GoalSpec goal = cfg.goal();
  const Configuration x0 = cfg.initial;
  Trajectory traj;
  double deviation = std::nan("");
  try {
    if (s.check_retime) {
      RunConfig ref_cfg = base;
      if (o.variant) ref_cfg.variant = cfg.variant;
      const PlanParams ref_p = ref_cfg.params();
      const KinematicsContext ref_ctx =
          KinematicsContext::make(goal, tune, ref_p.R_o, ref_p.mu_r, ref_p.time, ref_p.variant, ref_p.v_shift);
      const Trajectory ref = integrate(x0, ref_ctx, ref_p.t_f, ref_p.integrator);
      traj = retime(goal, ref_p, tune, ref, cfg.time);
      deviation = path_deviation(ref, traj);
    } else {
      const PlanParams p = cfg.params();
      const KinematicsContext ctx = KinematicsContext::make(goal, tune, p.R_o, p.mu_r, p.time, p.variant, p.v_shift);
      traj = integrate(x0, ctx, p.t_f, p.integrator);
    }
  } catch (const Error &e) {
    std::cerr << "simulate: " << e.what() << "\n";
    std::cout << json{{"solved", false}, {"error", e.what()}}.dump() << "\n";
    return kExitTyped;
  }

  const IterationDiagnostics D = extract_diagnostics(traj, goal, cfg.R_o);
  fs::create_directories(o.out);
  write_file(fs::path(o.out) / "trajectory.csv", trajectory_csv(traj));
  write_file(fs::path(o.out) / "plane_path.csv", plane_path_csv(traj));
  write_file(fs::path(o.out) / "sphere_path.csv", sphere_path_csv(traj));
  json j;
  j["solved"] = true;
  j["tuning"] = tuning_to_json(tune);
  j["time"] = {{"mode", to_string(cfg.time.mode)}, {"T", cfg.time.T_const}, {"t_f", cfg.time.t_f}};
  j["errors"] = {{"e_n", D.e_n}, {"e_r", D.e_r}, {"plane", D.e_p}, {"spin", D.e_s}};
  j["within_tolerances"] =
      D.e_n <= cfg.tol.eps_n && D.e_r <= cfg.tol.eps_r && D.e_p <= cfg.tol.eps_p && D.e_s <= cfg.tol.eps_s;
  j["paths"] = {{"L_s", traj.back().s_plane},
                {"L_o", traj.back().s_sphere},
                {"straightness", straightness(traj, goal)},
                {"sliding", sliding_ratio(traj)}};
  j["scale_fallbacks"] = traj.scale_fallbacks;
  if (s.check_retime) j["path_deviation"] = deviation;
  write_file(fs::path(o.out) / "report.json", j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_batch(const std::string &list, const std::string &out, unsigned parallel) {
  const std::vector<Scenario> scenarios = load_scenarios(list);
  const std::vector<ScenarioOutcome> res = run_batch(scenarios, parallel);
  write_batch_outputs(out, scenarios, res);
  std::cout << batch_summary_csv(res);
  for (const ScenarioOutcome &r : res)
    if (!r.ran || !r.result.converged) return kExitTyped;
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Straight-line spin-rolling motion planner"};
  app.require_subcommand(1);

  Common plan_o, dist_o, sim_o;
  GridOptions grid;
  SimOptions sim;
  std::string list, batch_out = "batch_out";
  unsigned parallel = 1;
  bool batch_seedless = false;

  auto *plan_cmd = app.add_subcommand("plan", "tune the controller until the goal is reached");
  plan_o.add(plan_cmd);

  auto *dist_cmd = app.add_subcommand("distance", "minimum travel needed for a goal");
  dist_o.add(dist_cmd, false);
  dist_cmd->add_flag("--grid", grid.grid, "emit the normalized distance surface as CSV");
  dist_cmd->add_option("--u-steps", grid.u_steps, "samples of u over [0, pi]");
  dist_cmd->add_option("--v", grid.v_fixed, "fixed v of the goal contact point [rad]");
  dist_cmd->add_option("--psi", grid.psi, "goal spin angles [rad]")->delimiter(',');
  dist_cmd->add_option("--csv", grid.csv, "write the grid here instead of stdout");

  auto *sim_cmd = app.add_subcommand("simulate", "one forward solve with fixed tunables");
  sim_o.add(sim_cmd);
  sim_cmd->add_option("--zeta-q", sim.zeta_q);
  sim_cmd->add_option("--zeta-u", sim.zeta_u);
  sim_cmd->add_option("--R-q", sim.R_q);
  sim_cmd->add_option("--R-u", sim.R_u);
  sim_cmd->add_option("--psi-u", sim.psi_u);
  sim_cmd->add_flag("--check-retime", sim.check_retime,
                    "solve with the config's time spec, re-time with the overrides and compare paths");

  auto *batch_cmd = app.add_subcommand("batch", "run a scenario list");
  batch_cmd->add_option("--list", list, "scenario list (JSON)")->required();
  batch_cmd->add_option("--out", batch_out, "output directory");
  batch_cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
  batch_cmd->add_flag("--seedless", batch_seedless, "no-op; every run is deterministic");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) return cmd_plan(plan_o);
    if (*dist_cmd) return cmd_distance(dist_o, grid);
    if (*sim_cmd) return cmd_simulate(sim_o, sim);
    if (*batch_cmd) return cmd_batch(list, batch_out, parallel);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
