#ifndef ROLLPLAN_IO_HPP
#define ROLLPLAN_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollplan/errors.hpp"
#include "rollplan/kinematics.hpp"
#include "rollplan/planner.hpp"
#include "rollplan/reachability.hpp"
#include "rollplan/timescale.hpp"

namespace rollplan {

using json = nlohmann::ordered_json;

/// Everything a run needs, as stored in a config file.
struct RunConfig {
  double R_o = 0.5;
  double mu_r = 4.0;
  Configuration initial;
  Configuration final_state{3.0, 3.2, -kPi / 2 - 0.8, 0.8, 0.8};
  Tolerances tol;
  TimeScaleSpec time;
  IntegratorOptions integrator;
  int max_iters = 500;
  double R_q_init = 0.005;
  bool v_shift = false;
  Variant variant = kDefaultVariant;
  AlphaForm alpha_form = kDefaultAlphaForm;
  double pi4_band = 1e-3;
  /// Starting tunables for plan and the fixed tunables for simulate.
  std::optional<TuningState> tuning;

  GoalSpec goal() const {
    GoalSpec g;
    g.P_0 = initial.plane();
    g.Psi_0 = {initial.u_o, initial.v_o};
    g.psi_0 = initial.psi;
    g.P_f = final_state.plane();
    g.Psi_f = {final_state.u_o, final_state.v_o};
    g.psi_f = final_state.psi;
    return g;
  }

  PlanParams params() const {
    PlanParams p;
    p.R_o = R_o;
    p.mu_r = mu_r;
    p.t_f = time.t_f;
    p.time = time;
    p.tol = tol;
    p.tol.max_iters = max_iters;
    p.integrator = integrator;
    p.variant = variant;
    p.alpha_form = alpha_form;
    p.v_shift = v_shift;
    p.pi4_band = pi4_band;
    if (tuning)
      p.initial = *tuning;
    else
      p.initial.R_q = R_q_init;
    return p;
  }
};

namespace detail {

inline const json &field(const json &j, const std::string &path, const std::string &key) {
  if (!j.is_object()) throw ConfigError("field '" + path + "': expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("field '" + (path.empty() ? key : path + "." + key) + "': missing");
  return *it;
}

inline std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

inline double num(const json &j, const std::string &path, const std::string &key) {
  const json &v = field(j, path, key);
  if (!v.is_number()) throw ConfigError("field '" + join(path, key) + "': expected a number");
  return v.get<double>();
}

inline void opt_num(const json &j, const std::string &path, const std::string &key, double &out) {
  if (j.contains(key)) out = num(j, path, key);
}

inline void opt_bool(const json &j, const std::string &path, const std::string &key, bool &out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_boolean()) throw ConfigError("field '" + join(path, key) + "': expected true/false");
  out = j.at(key).get<bool>();
}

inline std::string opt_str(const json &j, const std::string &path, const std::string &key,
                           const std::string &dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_string()) throw ConfigError("field '" + join(path, key) + "': expected a string");
  return j.at(key).get<std::string>();
}

inline Configuration read_configuration(const json &j, const std::string &path) {
  return {num(j, path, "u_s"), num(j, path, "v_s"), num(j, path, "u_o"), num(j, path, "v_o"),
          num(j, path, "psi")};
}

inline json write_configuration(const Configuration &c) {
  return json{{"u_s", c.u_s}, {"v_s", c.v_s}, {"u_o", c.u_o}, {"v_o", c.v_o}, {"psi", c.psi}};
}

inline void positive(double v, const std::string &name) {
  if (!(v > 0.0)) throw ConfigError("field '" + name + "': must be positive");
}

} // namespace detail

inline json tuning_to_json(const TuningState &t) {
  return json{{"zeta_q", t.zeta_q}, {"zeta_u", t.zeta_u}, {"R_q", t.R_q},
              {"R_u", t.R_u},       {"psi_u", t.psi_u},   {"k", t.k}};
}

inline TuningState tuning_from_json(const json &j, const std::string &path = "tuning") {
  TuningState t;
  t.zeta_q = detail::num(j, path, "zeta_q");
  t.zeta_u = detail::num(j, path, "zeta_u");
  t.R_q = detail::num(j, path, "R_q");
  t.R_u = detail::num(j, path, "R_u");
  t.psi_u = detail::num(j, path, "psi_u");
  if (j.contains("k")) t.k = j.at("k").get<int>();
  return t;
}

inline RunConfig config_from_json(const json &j) {
  using namespace detail;
  RunConfig c;
  const json &sphere = field(j, "", "sphere");
  c.R_o = num(sphere, "sphere", "R_o");
  c.mu_r = num(sphere, "sphere", "mu_r");
  c.initial = read_configuration(field(j, "", "initial"), "initial");
  c.final_state = read_configuration(field(j, "", "final"), "final");

  const json &tol = field(j, "", "tolerances");
  c.tol.eps_n = num(tol, "tolerances", "eps_n");
  c.tol.eps_r = num(tol, "tolerances", "eps_r");
  c.tol.eps_p = num(tol, "tolerances", "eps_p");
  c.tol.eps_s = num(tol, "tolerances", "eps_s");

  const json &time = field(j, "", "time");
  c.time.t_f = num(time, "time", "t_f");
  c.time.mode = time_mode_from_string(opt_str(time, "time", "mode", "constant"));
  opt_num(time, "time", "T", c.time.T_const);
  opt_num(time, "time", "a", c.time.a);
  opt_num(time, "time", "T_s", c.time.T_s);

  if (j.contains("integrator")) {
    const json &in = j.at("integrator");
    opt_num(in, "integrator", "rtol", c.integrator.rtol);
    opt_num(in, "integrator", "atol", c.integrator.atol);
    opt_num(in, "integrator", "max_step", c.integrator.max_step);
  }
  if (j.contains("planner")) {
    const json &pl = j.at("planner");
    double mi = c.max_iters;
    opt_num(pl, "planner", "max_iters", mi);
    c.max_iters = static_cast<int>(mi);
    opt_num(pl, "planner", "R_q_init", c.R_q_init);
    opt_bool(pl, "planner", "v_shift", c.v_shift);
    opt_num(pl, "planner", "pi4_exclusion_band", c.pi4_band);
    try {
      c.variant = variant_from_string(opt_str(pl, "planner", "variant", to_string(kDefaultVariant)));
      c.alpha_form = alpha_form_from_string(opt_str(pl, "planner", "alpha_form", to_string(kDefaultAlphaForm)));
    } catch (const ConfigError &e) {
      throw ConfigError(std::string("field 'planner': ") + e.what());
    }
  }
  if (j.contains("tuning")) c.tuning = tuning_from_json(j.at("tuning"));

  positive(c.R_o, "sphere.R_o");
  positive(c.mu_r, "sphere.mu_r");
  positive(c.tol.eps_n, "tolerances.eps_n");
  positive(c.tol.eps_r, "tolerances.eps_r");
  positive(c.tol.eps_p, "tolerances.eps_p");
  positive(c.tol.eps_s, "tolerances.eps_s");
  positive(c.time.t_f, "time.t_f");
  if (c.time.mode == TimeMode::constant && c.time.T_const == 0.0)
    throw ConfigError("field 'time.T': must be nonzero");
  if (c.time.mode == TimeMode::smooth) {
    positive(c.time.a, "time.a");
    positive(c.time.T_s, "time.T_s");
  }
  positive(c.integrator.rtol, "integrator.rtol");
  positive(c.integrator.atol, "integrator.atol");
  if (c.integrator.max_step < 0.0) throw ConfigError("field 'integrator.max_step': must be >= 0");
  if (c.max_iters <= 0) throw ConfigError("field 'planner.max_iters': must be positive");
  positive(c.R_q_init, "planner.R_q_init");
  return c;
}

inline json config_to_json(const RunConfig &c) {
  json j;
  j["sphere"] = {{"R_o", c.R_o}, {"mu_r", c.mu_r}};
  j["initial"] = detail::write_configuration(c.initial);
  j["final"] = detail::write_configuration(c.final_state);
  j["tolerances"] = {{"eps_n", c.tol.eps_n}, {"eps_r", c.tol.eps_r}, {"eps_p", c.tol.eps_p}, {"eps_s", c.tol.eps_s}};
  j["time"] = {{"t_f", c.time.t_f}, {"mode", to_string(c.time.mode)}, {"T", c.time.T_const},
               {"a", c.time.a},     {"T_s", c.time.T_s}};
  j["integrator"] = {{"rtol", c.integrator.rtol}, {"atol", c.integrator.atol}, {"max_step", c.integrator.max_step}};
  j["planner"] = {{"max_iters", c.max_iters},     {"R_q_init", c.R_q_init},
                  {"v_shift", c.v_shift},         {"variant", to_string(c.variant)},
                  {"alpha_form", to_string(c.alpha_form)}, {"pi4_exclusion_band", c.pi4_band}};
  if (c.tuning) j["tuning"] = tuning_to_json(*c.tuning);
  return j;
}

inline json parse_json_text(const std::string &text, const std::string &origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RunConfig load_config(const std::filesystem::path &path) {
  return config_from_json(parse_json_text(read_file(path), path.string()));
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

/// Number formatting shared by every numeric export.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char *kTrajectoryHeader =
    "t,s_plane,s_sphere,u_s,v_s,u_o,v_o,psi,x_o,y_o,z_o,delta,alpha_s,beta_s,gamma_s,theta,phi,psi_q";

inline std::string trajectory_csv(const Trajectory &tr) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const Sample &s : tr.samples) {
    const double row[] = {s.t,        s.s_plane,        s.s_sphere,       s.x.u_s,          s.x.v_s,
                          s.x.u_o,    s.x.v_o,          s.x.psi,          s.xyz[0],         s.xyz[1],
                          s.xyz[2],   s.inputs.delta,   s.inputs.alpha_s, s.inputs.beta_s,  s.inputs.gamma_s,
                          s.inputs.theta, s.inputs.phi, s.inputs.psi_q};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += fmt17(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json point_json(const SpherePoint &p) { return json{{"u_o", p.u_o}, {"v_o", p.v_o}}; }
inline json point_json(const PlanePoint &p) { return json{{"u_s", p.u_s}, {"v_s", p.v_s}}; }

inline json record_json(const IterationRecord &r) {
  json j;
  j["k"] = r.k;
  j["epoch"] = r.epoch;
  j["tuning"] = tuning_to_json(r.tuning);
  j["solved"] = r.solved;
  if (!r.error.empty()) j["error"] = r.error;
  if (r.solved) {
    const IterationDiagnostics &D = r.diag;
    json d;
    d["e_n"] = D.e_n;
    d["e_r"] = D.e_r;
    d["e_p"] = D.e_p;
    d["e_s"] = D.e_s;
    d["e_n_best"] = number_or_null(D.best.e_n);
    d["e_r_best"] = number_or_null(D.best.e_r);
    d["e_s_best"] = number_or_null(D.best.e_s);
    d["d_s"] = D.d_s;
    d["n_s"] = number_or_null(D.n_s);
    d["Psi_n"] = point_json(D.Psi_n);
    d["Psi_l"] = point_json(D.Psi_l);
    d["Psi_u"] = D.Psi_u ? point_json(*D.Psi_u) : json(nullptr);
    d["Psi_v"] = D.Psi_v ? point_json(*D.Psi_v) : json(nullptr);
    d["P_n"] = point_json(D.P_n);
    d["P_l"] = point_json(D.P_l);
    d["psi_n"] = D.psi_n;
    d["psi_l"] = D.psi_l;
    j["diagnostics"] = d;
    j["straightness"] = r.straightness;
    j["sliding"] = r.sliding;
  }
  j["flags"] = {{"n", r.ok_n}, {"r", r.ok_r}, {"p", r.ok_p}, {"s", r.ok_s}};
  j["update"] = to_string(r.update);
  if (r.update == UpdateKind::phase1) {
    json rho = json::array(), rho_n = json::array();
    for (int i = 1; i <= 4; ++i) {
      rho.push_back(r.flags.rho[i]);
      rho_n.push_back(r.flags.rho_n[i]);
    }
    j["region"] = {{"rho", rho}, {"rho_n", rho_n}, {"sign", r.sign}};
  }
  return j;
}

inline std::string iteration_log_jsonl(const std::vector<IterationRecord> &log) {
  std::string out;
  for (const IterationRecord &r : log) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

inline json distance_json(const DistanceReport &r) {
  const CapGeometry &c = r.cap;
  return json{{"d", r.d},
              {"feasible", r.feasible},
              {"slack", r.slack},
              {"waived", r.waived},
              {"cap",
               {{"S_t", c.S_t}, {"S_c_prime", c.S_c_prime}, {"dS", c.dS}, {"h", c.h}, {"h_c", c.h_c},
                {"h_c_prime", c.h_c_prime}, {"a_c", c.a_c}, {"a_c_prime", c.a_c_prime}, {"alpha", c.alpha},
                {"alpha_prime", c.alpha_prime}, {"Q_of", c.Q_of}, {"psi_prime", c.psi_prime},
                {"kappa_o", c.kappa_o}}}};
}

/// Report body without wall time, so repeated runs compare byte for byte.
inline json plan_summary_json(const PlanResult &r, const GoalSpec &goal) {
  json j;
  j["converged"] = r.converged;
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["iterations"] = r.log.size();
  if (r.distance) j["distance"] = distance_json(*r.distance);
  if (r.best) {
    const IterationDiagnostics &D = r.best->diag;
    j["best_k"] = r.best->k;
    j["errors"] = {{"e_n", D.e_n}, {"e_r", D.e_r}, {"plane", D.e_p}, {"spin", D.e_s}};
    j["tuning"] = tuning_to_json(r.tuning);
  }
  if (!r.trajectory.empty()) {
    const Sample &l = r.trajectory.back();
    j["paths"] = {{"L_s", l.s_plane}, {"L_o", l.s_sphere}, {"straightness", straightness(r.trajectory, goal)},
                  {"sliding", sliding_ratio(r.trajectory)}};
  }
  return j;
}

inline json plan_report_json(const PlanResult &r, const GoalSpec &goal) {
  json j = plan_summary_json(r, goal);
  j["wall_time"] = r.wall_time;
  return j;
}

inline std::string plane_path_csv(const Trajectory &tr) {
  std::string out = "u_s,v_s\n";
  for (const Sample &s : tr.samples) out += fmt17(s.x.u_s) + "," + fmt17(s.x.v_s) + "\n";
  return out;
}

inline std::string sphere_path_csv(const Trajectory &tr) {
  std::string out = "x_o,y_o,z_o\n";
  for (const Sample &s : tr.samples)
    out += fmt17(s.xyz[0]) + "," + fmt17(s.xyz[1]) + "," + fmt17(s.xyz[2]) + "\n";
  return out;
}

inline std::string error_series_csv(const std::vector<IterationRecord> &log) {
  std::string out = "k,e_n,e_r,e_p,e_s\n";
  for (const IterationRecord &r : log) {
    if (!r.solved) continue;
    out += std::to_string(r.k) + "," + fmt17(r.diag.e_n) + "," + fmt17(r.diag.e_r) + "," + fmt17(r.diag.e_p) +
           "," + fmt17(r.diag.e_s) + "\n";
  }
  return out;
}

/// Write every plan artifact into dir. The report carries wall time only when asked.
inline void write_plan_outputs(const std::filesystem::path &dir, const PlanResult &r, const GoalSpec &goal,
                               bool with_wall_time = true) {
  std::filesystem::create_directories(dir);
  write_file(dir / "trajectory.csv", trajectory_csv(r.trajectory));
  write_file(dir / "iterations.jsonl", iteration_log_jsonl(r.log));
  const json rep = with_wall_time ? plan_report_json(r, goal) : plan_summary_json(r, goal);
  write_file(dir / "report.json", rep.dump(2) + "\n");
  write_file(dir / "plane_path.csv", plane_path_csv(r.trajectory));
  write_file(dir / "sphere_path.csv", sphere_path_csv(r.trajectory));
  write_file(dir / "errors.csv", error_series_csv(r.log));
}

inline std::string distance_surface_csv(const std::vector<DistanceCell> &cells) {
  std::string out = "u_of,psi_f,d_over_R\n";
  for (const DistanceCell &c : cells)
    out += fmt17(c.u) + "," + fmt17(c.psi) + "," + (c.d_over_R ? fmt17(*c.d_over_R) : std::string()) + "\n";
  return out;
}

} // namespace rollplan

#endif // ROLLPLAN_IO_HPP
