#ifndef ROLLPLAN_PLANNER_HPP
#define ROLLPLAN_PLANNER_HPP

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rollplan/angles.hpp"
#include "rollplan/controller.hpp"
#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"
#include "rollplan/kinematics.hpp"
#include "rollplan/reachability.hpp"
#include "rollplan/timescale.hpp"

namespace rollplan {

struct Tolerances {
  double eps_n = 0.07;
  double eps_r = 0.07;
  double eps_p = 0.12;
  double eps_s = 0.05;
  int max_iters = 500;
};

/// Running minima of the errors across iterations.
struct BestErrors {
  double e_n = std::numeric_limits<double>::infinity();
  double e_r = std::numeric_limits<double>::infinity();
  double e_s = std::numeric_limits<double>::infinity();
};

struct IterationDiagnostics {
  SpherePoint Psi_n, Psi_l;
  std::optional<SpherePoint> Psi_u, Psi_v;
  PlanePoint P_n, P_l;
  double psi_l = 0.0;
  double psi_n = 0.0;
  double e_n = 0.0;
  double e_r = 0.0;
  double e_p = 0.0;
  double e_s = 0.0;
  BestErrors best;
  double d_s = 0.0;
  double n_s = 0.0;
  std::size_t nearest_index = 0;
};

struct RegionFlags {
  bool rho[5] = {false, false, false, false, false};
  bool rho_n[5] = {false, false, false, false, false};

  bool any_rho() const { return rho[1] || rho[2] || rho[3] || rho[4]; }
  /// Only the i-th nearest-point flag is set.
  bool only_n(int i) const {
    int count = 0;
    for (int j = 1; j <= 4; ++j) count += rho_n[j] ? 1 : 0;
    return rho_n[i] && count == 1;
  }
};

/// Last crossing of the cutting plane u_o = target (index 2) or v_o = target (index 3).
inline std::optional<SpherePoint> last_crossing(const Trajectory &traj, bool along_u, double target) {
  std::optional<SpherePoint> out;
  const auto &S = traj.samples;
  auto coord = [&](const Sample &s) { return along_u ? s.x.u_o : s.x.v_o; };
  for (std::size_t i = 1; i < S.size(); ++i) {
    const double d0 = wrap_angle(coord(S[i - 1]) - target);
    const double d1 = wrap_angle(coord(S[i]) - target);
    const bool change = d0 == 0.0 || ((d0 < 0.0) != (d1 < 0.0));
    if (!change || std::abs(d1 - d0) > kPi) continue;
    const double f = d1 == d0 ? 0.0 : d0 / (d0 - d1);
    const SpherePoint a = S[i - 1].x.sphere(), b = S[i].x.sphere();
    out = normalized({a.u_o + f * wrap_angle(b.u_o - a.u_o), a.v_o + f * wrap_angle(b.v_o - a.v_o)});
  }
  return out;
}

inline IterationDiagnostics extract_diagnostics(const Trajectory &traj, const GoalSpec &goal, double R_o,
                                                BestErrors best = {}) {
  if (traj.empty()) throw StepFailure("extract_diagnostics: empty trajectory");
  IterationDiagnostics D;
  const auto &S = traj.samples;
  double e_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double e = chord_error(S[i].x.sphere(), goal.Psi_f, R_o);
    if (e < e_min) {
      e_min = e;
      D.nearest_index = i;
    }
  }
  const Sample &n = S[D.nearest_index];
  const Sample &l = S.back();
  D.e_n = e_min;
  D.Psi_n = n.x.sphere();
  D.P_n = n.x.plane();
  D.psi_n = n.x.psi;
  D.Psi_l = l.x.sphere();
  D.P_l = l.x.plane();
  D.psi_l = l.x.psi;
  D.e_r = chord_error(D.Psi_l, goal.Psi_f, R_o);
  D.e_p = plane_distance(D.P_l, goal.P_f);
  D.e_s = std::abs(goal.psi_f - D.psi_l);
  const double L = plane_distance(goal.P_0, goal.P_f);
  D.d_s = L > 0.0 ? plane_distance(D.P_n, goal.P_f) / L : 0.0;
  D.n_s = D.psi_n != 0.0 ? std::abs(D.psi_l / D.psi_n) : std::numeric_limits<double>::infinity();
  if (D.psi_l == 0.0 && D.psi_n == 0.0) D.n_s = 0.0;
  D.Psi_u = last_crossing(traj, true, goal.Psi_f.u_o);
  D.Psi_v = last_crossing(traj, false, goal.Psi_f.v_o);
  best.e_n = std::min(best.e_n, D.e_n);
  best.e_r = std::min(best.e_r, D.e_r);
  best.e_s = std::min(best.e_s, D.e_s);
  D.best = best;
  return D;
}

/// Section flags. Sides are judged against the cutting planes through the goal,
/// relative to the side the initial contact point lies on.
inline RegionFlags region_flags(const IterationDiagnostics &D, const GoalSpec &goal) {
  RegionFlags F;
  auto u_side = [&](SpherePoint p) { return wrap_angle(p.u_o - goal.Psi_f.u_o) > 0.0; };
  auto v_side = [&](SpherePoint p) { return wrap_angle(p.v_o - goal.Psi_f.v_o) > 0.0; };
  const bool u0 = u_side(goal.Psi_0), v0 = v_side(goal.Psi_0);
  if (D.Psi_v) {
    F.rho[1] = u_side(*D.Psi_v) == u0;
    F.rho[2] = !F.rho[1];
    F.rho_n[1] = u_side(D.Psi_n) == u0;
    F.rho_n[2] = !F.rho_n[1];
  }
  if (D.Psi_u) {
    F.rho[4] = v_side(*D.Psi_u) == v0;
    F.rho[3] = !F.rho[4];
  }
  F.rho_n[4] = v_side(D.Psi_n) == v0;
  F.rho_n[3] = !F.rho_n[4];
  return F;
}

/// Sign of the zeta_q step from the sectioned-sphere decision tree; 0 when no branch applies.
inline int region_sign(const RegionFlags &F, SpherePoint f_rot) {
  const bool vpos = f_rot.v_o >= 0.0, upos = f_rot.u_o >= 0.0;
  const auto &r = F.rho;
  const auto &n = F.rho_n;
  if (r[2] && r[4]) {
    if (F.only_n(2)) return +1;
    if ((n[2] && n[4]) || F.only_n(4)) return vpos ? (upos ? +1 : -1) : -1;
    return 0;
  }
  if ((n[2] && n[3]) || (r[3] && n[2] && n[4])) return upos ? +1 : -1;
  if (!F.any_rho()) return vpos ? -1 : +1;
  if (F.only_n(1) || n[4]) return vpos ? +1 : -1;
  if (F.only_n(2) || n[3]) return vpos ? -1 : +1;
  return 0;
}

struct Phase1Step {
  int sign = 0;
  double magnitude = 0.0;
  RegionFlags flags;
  SpherePoint f_rot, n_rot;
};

inline Phase1Step phase1_step(const IterationDiagnostics &D, const GoalSpec &goal) {
  Phase1Step st;
  const double G = goal.heading();
  st.f_rot = rotate_to_goal_frame(goal.Psi_f, G);
  st.n_rot = rotate_to_goal_frame(D.Psi_n, G);
  st.flags = region_flags(D, goal);
  st.sign = region_sign(st.flags, st.f_rot);
  const QAngles qf = zx_zy_angles(st.f_rot), qn = zx_zy_angles(st.n_rot);
  const double diff = qf.zx == qn.zx ? std::abs(qf.zx - qn.zx) : std::abs(qf.zy - qn.zy);
  st.magnitude = D.best.e_n * diff;
  return st;
}

inline TuningState phase1_update(const IterationDiagnostics &D, const GoalSpec &goal, TuningState t) {
  const Phase1Step st = phase1_step(D, goal);
  t.zeta_q += st.sign * st.magnitude;
  return t;
}

inline double radius_increment(double d_s, double best_e_r, double n_s) {
  const double base = d_s * best_e_r;
  if (n_s <= 1.0) return base;
  if (n_s <= 2.0) return n_s * base;
  return base / n_s;
}

inline TuningState phase2_radius_update(const IterationDiagnostics &D, TuningState t, double R_o,
                                        double eps_r) {
  if (chord_error(D.Psi_l, D.Psi_n, R_o) > eps_r)
    t.R_q += R_o * radius_increment(D.d_s, D.best.e_r, D.n_s);
  else
    t.R_q -= R_o * D.d_s * D.best.e_r;
  return t;
}

inline TuningState phase2_plane_update(const IterationDiagnostics &D, const GoalSpec &goal, TuningState t,
                                       double R_o) {
  const double back = plane_distance(D.P_l, goal.P_0);
  if (back < 1e-12) throw DegenerateError("plane update: P_l coincides with P_0");
  t.R_u -= t.R_q * plane_distance(D.P_l, goal.P_f) / back;
  const double dz = std::atan(t.R_u * std::tan(t.zeta_q) / R_o);
  t.zeta_u += goal.Psi_f.v_o >= 0.0 ? -dz : dz;
  return t;
}

inline TuningState phase3_spin_update(const IterationDiagnostics &D, const GoalSpec &goal, TuningState t) {
  t.psi_u -= D.best.e_s * sign_of(goal.psi_f - D.psi_l);
  return t;
}

struct PlanParams {
  double R_o = 0.5;
  double mu_r = 4.0;
  double t_f = 15.0;
  TimeScaleSpec time;
  Tolerances tol;
  IntegratorOptions integrator;
  Variant variant = kDefaultVariant;
  AlphaForm alpha_form = kDefaultAlphaForm;
  bool v_shift = false;
  double pi4_band = 1e-3;
  TuningState initial;
};

enum class PlanStatus { converged, max_iterations, infeasible_goal, excluded_direction, solver_failure };

inline const char *to_string(PlanStatus s) {
  switch (s) {
  case PlanStatus::converged: return "Converged";
  case PlanStatus::max_iterations: return "MaxIterations";
  case PlanStatus::infeasible_goal: return "InfeasibleGoal";
  case PlanStatus::excluded_direction: return "ExcludedDirection";
  case PlanStatus::solver_failure: return "SolverFailure";
  }
  return "Unknown";
}

enum class UpdateKind { none, phase1, radius, plane, spin, backtrack };

inline const char *to_string(UpdateKind u) {
  switch (u) {
  case UpdateKind::none: return "none";
  case UpdateKind::phase1: return "phase1";
  case UpdateKind::radius: return "radius";
  case UpdateKind::plane: return "plane";
  case UpdateKind::spin: return "spin";
  case UpdateKind::backtrack: return "backtrack";
  }
  return "none";
}

struct IterationRecord {
  int k = 0;
  TuningState tuning;
  bool solved = false;
  std::string error;
  IterationDiagnostics diag;
  bool ok_n = false, ok_r = false, ok_p = false, ok_s = false;
  UpdateKind update = UpdateKind::none;
  int sign = 0;
  RegionFlags flags;
  double straightness = 0.0;
  double sliding = 0.0;
  int epoch = 0;

  int satisfied() const { return ok_n + ok_r + ok_p + ok_s; }
};

struct PlanResult {
  PlanStatus status = PlanStatus::max_iterations;
  bool converged = false;
  TuningState tuning;
  Trajectory trajectory;
  std::vector<IterationRecord> log;
  std::optional<IterationRecord> best;
  std::optional<DistanceReport> distance;
  std::string message;
  double wall_time = 0.0;
};

/// Ranking of iterates for the best-so-far report.
inline bool better_iterate(const IterationRecord &a, const IterationRecord &b, const Tolerances &tol) {
  if (a.satisfied() != b.satisfied()) return a.satisfied() > b.satisfied();
  auto score = [&](const IterationRecord &r) {
    return r.diag.e_n / tol.eps_n + r.diag.e_r / tol.eps_r + r.diag.e_p / tol.eps_p + r.diag.e_s / tol.eps_s;
  };
  return score(a) < score(b);
}

inline PlanResult plan(const GoalSpec &goal, const PlanParams &p) {
  const auto t_start = std::chrono::steady_clock::now();
  PlanResult res;
  auto finish = [&](PlanStatus s, std::string msg) {
    res.status = s;
    res.converged = s == PlanStatus::converged;
    res.message = std::move(msg);
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
  };

  try {
    res.distance = min_distance(goal, p.R_o, p.alpha_form);
  } catch (const Error &e) {
    if (goal.travel() < 2.0 * kPi * p.R_o)
      return finish(PlanStatus::infeasible_goal, std::string("minimum distance undefined: ") + e.what());
  }
  if (res.distance && !res.distance->waived && !res.distance->feasible)
    return finish(PlanStatus::infeasible_goal,
                  "travel " + std::to_string(goal.travel()) + " below minimum distance d = " +
                      std::to_string(res.distance->d));
  if (std::abs(wrap_angle(goal.heading() - kPi / 4)) < p.pi4_band)
    return finish(PlanStatus::excluded_direction, "goal heading inside the pi/4 exclusion band");

  const Configuration x0{goal.P_0.u_s, goal.P_0.v_s, goal.Psi_0.u_o, goal.Psi_0.v_o, goal.psi_0};
  TuningState tune = p.initial;
  std::optional<TuningState> prev;
  BestErrors best;
  int epoch = 0;

  for (int k = 0; k < p.tol.max_iters; ++k) {
    tune.k = k;
    IterationRecord rec;
    rec.k = k;
    rec.tuning = tune;
    rec.epoch = epoch;
    Trajectory traj;
    try {
      const KinematicsContext ctx =
          KinematicsContext::make(goal, tune, p.R_o, p.mu_r, p.time, p.variant, p.v_shift);
      traj = integrate(x0, ctx, p.t_f, p.integrator);
      rec.diag = extract_diagnostics(traj, goal, p.R_o, best);
      rec.solved = true;
    } catch (const Error &e) {
      rec.error = e.what();
    }

    if (!rec.solved) {
      if (!prev) {
        res.log.push_back(rec);
        return finish(PlanStatus::solver_failure, "initial solve failed: " + rec.error);
      }
      TuningState back = *prev;
      back.zeta_q = (prev->zeta_q + tune.zeta_q) / 2;
      back.zeta_u = (prev->zeta_u + tune.zeta_u) / 2;
      back.R_q = (prev->R_q + tune.R_q) / 2;
      back.R_u = (prev->R_u + tune.R_u) / 2;
      back.psi_u = (prev->psi_u + tune.psi_u) / 2;
      rec.update = UpdateKind::backtrack;
      res.log.push_back(rec);
      tune = back;
      continue;
    }

    best = rec.diag.best;
    const IterationDiagnostics &D = rec.diag;
    rec.straightness = straightness(traj, goal);
    rec.sliding = sliding_ratio(traj);
    rec.ok_n = D.e_n <= p.tol.eps_n;
    rec.ok_r = D.e_r <= p.tol.eps_r;
    rec.ok_p = D.e_p <= p.tol.eps_p;
    rec.ok_s = D.e_s <= p.tol.eps_s;

    if (!res.best || better_iterate(rec, *res.best, p.tol)) {
      res.best = rec;
      res.trajectory = traj;
      res.tuning = tune;
    }
    if (rec.ok_n && rec.ok_r && rec.ok_p && rec.ok_s) {
      res.log.push_back(rec);
      res.best = rec;
      res.trajectory = std::move(traj);
      res.tuning = tune;
      return finish(PlanStatus::converged, "converged");
    }

    TuningState next = tune;
    try {
      if (!rec.ok_n) {
        const Phase1Step st = phase1_step(D, goal);
        rec.update = UpdateKind::phase1;
        rec.sign = st.sign;
        rec.flags = st.flags;
        next.zeta_q += st.sign * st.magnitude;
      } else if (!rec.ok_r) {
        rec.update = UpdateKind::radius;
        next = phase2_radius_update(D, tune, p.R_o, p.tol.eps_r);
      } else if (!rec.ok_p) {
        rec.update = UpdateKind::plane;
        next = phase2_plane_update(D, goal, tune, p.R_o);
      } else {
        rec.update = UpdateKind::spin;
        next = phase3_spin_update(D, goal, tune);
        best.e_n = best.e_r = std::numeric_limits<double>::infinity();
        ++epoch;
      }
    } catch (const Error &e) {
      rec.error = e.what();
      rec.update = UpdateKind::none;
    }
    res.log.push_back(rec);
    prev = tune;
    tune = next;
  }
  return finish(PlanStatus::max_iterations, "iteration budget exhausted");
}

} // namespace rollplan

#endif // ROLLPLAN_PLANNER_HPP
