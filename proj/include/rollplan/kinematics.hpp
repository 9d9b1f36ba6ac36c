#ifndef ROLLPLAN_KINEMATICS_HPP
#define ROLLPLAN_KINEMATICS_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rollplan/angles.hpp"
#include "rollplan/controller.hpp"
#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"
#include "rollplan/integrator.hpp"
#include "rollplan/reachability.hpp"
#include "rollplan/timescale.hpp"

namespace rollplan {

/// Reading of the first two (plane) rows of the model.
enum class Variant {
  as_written,     ///< sin(theta + phi) in both plane rows of the drift and gamma columns
  trig_corrected, ///< cos(theta + phi) in the u_s row of the drift and gamma columns
};

inline const char *to_string(Variant v) {
  return v == Variant::as_written ? "as_written" : "trig_corrected";
}

inline Variant variant_from_string(const std::string &s) {
  if (s == "as_written") return Variant::as_written;
  if (s == "trig_corrected") return Variant::trig_corrected;
  throw ConfigError("unknown variant '" + s + "'");
}

/// Default chosen by the no-sliding arbitration (see tests/fixtures/variant_arbitration.json).
inline constexpr Variant kDefaultVariant = Variant::as_written;

struct StateDerivative {
  double du_s = 0.0;
  double dv_s = 0.0;
  double du_o = 0.0;
  double dv_o = 0.0;
  double dpsi = 0.0;
};

/// Everything the right-hand side needs besides (t, x).
struct KinematicsContext {
  GoalSpec goal;
  TuningState tuning;
  SpinTracker tracker;
  double R_o = 0.5;
  double mu_r = 4.0;
  TimeScaleSpec time;
  Variant variant = kDefaultVariant;
  bool v_shift = false;
  RateDistance rate = RateDistance::projected;

  static KinematicsContext make(const GoalSpec &goal, const TuningState &tuning, double R_o,
                                double mu_r, const TimeScaleSpec &time,
                                Variant variant = kDefaultVariant, bool v_shift = false) {
    KinematicsContext c;
    c.goal = goal;
    c.tuning = tuning;
    c.R_o = R_o;
    c.mu_r = mu_r;
    c.time = time;
    c.variant = variant;
    c.v_shift = v_shift;
    c.tracker = SpinTracker::make(goal, R_o, tuning.psi_u);
    return c;
  }
};

struct Evaluation {
  ControlInputs inputs;
  VirtualSurfaceState surface;
  StateDerivative dx;
  bool scale_fallback = false;
};

inline Evaluation evaluate(double t, const Configuration &x, const KinematicsContext &ctx) {
  const double R = ctx.R_o;
  const double cv = std::cos(x.v_o);
  if (std::abs(cv) <= 1e-9) throw PoleError("rhs: cos v_o vanishes");

  Evaluation ev;
  ev.surface = virtual_surface(x, ctx.goal, ctx.tuning, R, ctx.mu_r, ctx.v_shift);
  SpinTracker tr = ctx.tracker;
  tr.S_i_t = R * R * (x.psi - ctx.goal.psi_0);
  const double psi_q = spin_deviation(x.psi, ctx.goal.psi_0, tr, R);
  ControlInputs ci = control_inputs(x, ctx.goal, ev.surface, R, psi_q, ctx.v_shift);
  ci.delta = scaled_rolling_rate(t, x, ctx.goal, ctx.time, ci.alpha_s, ev.scale_fallback, ctx.rate);

  const double S = ci.theta + ci.phi;
  const double s = std::sin(S), c = std::cos(S);
  const double sp = std::sin(x.psi), cp = std::cos(x.psi);
  const double tv = std::tan(x.v_o);
  const double sps = std::sin(x.psi + S), cps = std::cos(x.psi + S);
  const double u_row = ctx.variant == Variant::as_written ? s : c;

  const double g = ci.gamma_s, b = ci.beta_s, a = ci.alpha_s, d = ci.delta;
  StateDerivative &dx = ev.dx;
  dx.du_s = d * (u_row - g * R * u_row + b * R * s);
  dx.dv_s = d * (s - g * R * s - b * R * c);
  dx.du_o = d * (s * (sp - cp) / (R * cv) + g * s * (cp - sp) / cv - b * sps / cv);
  dx.dv_o = d * (s * (cp + sp) / R - g * s * (sp + cp) - b * cps);
  dx.dpsi = d * (tv * (s * (sp - cp) + std::cos(ci.phi)) / R + g * tv * s * (cp - sp) - b * tv * sps - a);
  ev.inputs = ci;
  return ev;
}

inline StateDerivative rhs(double t, const Configuration &x, const KinematicsContext &ctx) {
  return evaluate(t, x, ctx).dx;
}

struct Sample {
  double t = 0.0;
  double s_plane = 0.0;
  double s_sphere = 0.0;
  /// u_o, v_o wrapped; psi cumulative.
  Configuration x;
  Vec3 xyz{};
  ControlInputs inputs;
};

struct Trajectory {
  std::vector<Sample> samples;
  IntegratorStats stats;
  std::size_t scale_fallbacks = 0;

  const Sample &back() const { return samples.back(); }
  bool empty() const { return samples.empty(); }
};

using KinState = std::array<double, 7>;

inline Trajectory integrate(const Configuration &x0, const KinematicsContext &ctx, double t_f,
                            const IntegratorOptions &opt = {}) {
  if (!(t_f > 0.0)) throw StepFailure("integrate: t_f must be positive");
  const double R = ctx.R_o;
  auto f = [&](double t, const KinState &y, KinState &dy) {
    const Configuration x{y[0], y[1], y[2], y[3], y[4]};
    const StateDerivative d = evaluate(t, x, ctx).dx;
    dy[0] = d.du_s;
    dy[1] = d.dv_s;
    dy[2] = d.du_o;
    dy[3] = d.dv_o;
    dy[4] = d.dpsi;
    dy[5] = std::hypot(d.du_s, d.dv_s);
    const double cv = std::cos(y[3]);
    dy[6] = R * std::sqrt(cv * cv * d.du_o * d.du_o + d.dv_o * d.dv_o);
  };
  Trajectory tr;
  tr.samples.reserve(opt.min_samples + 64);
  auto sink = [&](double t, const KinState &y, const KinState &) {
    Sample s;
    s.t = t;
    s.s_plane = y[5];
    s.s_sphere = y[6];
    const Configuration raw{y[0], y[1], y[2], y[3], y[4]};
    try {
      const Evaluation ev = evaluate(t, raw, ctx);
      if (ev.scale_fallback) ++tr.scale_fallbacks;
      s.inputs = ev.inputs;
    } catch (const Error &) {
      const double nan = std::nan("");
      s.inputs = {nan, nan, nan, nan, nan, nan, nan, nan};
    }
    s.x = raw;
    s.x.u_o = wrap_angle(raw.u_o);
    s.x.v_o = wrap_angle(raw.v_o);
    s.xyz = sphere_embed({raw.u_o, raw.v_o}, R);
    tr.samples.push_back(s);
  };
  KinState y0{x0.u_s, x0.v_s, x0.u_o, x0.v_o, x0.psi, 0.0, 0.0};
  tr.stats = dopri5<7, 5>(f, 0.0, y0, t_f, opt, sink);
  return tr;
}

/// Largest angular deviation of the plane path from the goal heading.
inline double straightness(const Trajectory &traj, const GoalSpec &goal, double min_disp = 1e-6) {
  const double G = goal.heading();
  double worst = 0.0;
  for (const Sample &s : traj.samples) {
    const double dx = s.x.u_s - goal.P_0.u_s, dy = s.x.v_s - goal.P_0.v_s;
    if (std::hypot(dx, dy) <= min_disp) continue;
    worst = std::max(worst, std::abs(wrap_angle(std::atan2(dy, dx) - G)));
  }
  return worst;
}

/// Relative mismatch between plane and sphere arc lengths.
inline double sliding_ratio(const Trajectory &traj) {
  if (traj.empty()) return 0.0;
  const Sample &s = traj.back();
  return std::abs(s.s_plane - s.s_sphere) / std::max(s.s_plane, 1e-9);
}

} // namespace rollplan

#endif // ROLLPLAN_KINEMATICS_HPP
