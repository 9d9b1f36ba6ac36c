#ifndef ROLLPLAN_CONTROLLER_HPP
#define ROLLPLAN_CONTROLLER_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "rollplan/angles.hpp"
#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"
#include "rollplan/reachability.hpp"

namespace rollplan {

/// Sphere-on-plane contact state. psi is cumulative (not wrapped).
struct Configuration {
  double u_s = 0.0;
  double v_s = 0.0;
  double u_o = 0.0;
  double v_o = 0.0;
  double psi = 0.0;

  PlanePoint plane() const { return {u_s, v_s}; }
  SpherePoint sphere() const { return normalized({u_o, v_o}); }
};

/// Constants the planner tunes between solves.
struct TuningState {
  double zeta_q = 0.0;
  double zeta_u = 0.0;
  double R_q = 0.005;
  double R_u = 0.0;
  double psi_u = 0.0;
  int k = 0;

  double R_a() const { return R_q + R_u; }
  double zeta_prime() const { return zeta_q + zeta_u; }
};

struct VirtualSurfaceState {
  double R_n = 0.0;
  double R_g = 0.0;
  double R_t = 0.0;
  double R_i = 0.0;
  double R_a = 0.0;
  double zeta = 0.0;
  double zeta_prime = 0.0;
  double u_prime = 0.0;
  double v_prime = 0.0;
};

struct ControlInputs {
  double alpha_s = 0.0;
  double beta_s = 0.0;
  double gamma_s = 0.0;
  double G_f = 0.0;
  double delta = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi_q = 0.0;
};

/// Desired under-cap area and the area swept so far.
struct SpinTracker {
  double S_t = 0.0;
  double S_i_t = 0.0;
  double psi_u = 0.0;

  static SpinTracker make(const GoalSpec &goal, double R_o, double psi_u) {
    const CapGeometry c = base_cap(goal.Psi_f, R_o);
    SpinTracker t;
    t.psi_u = psi_u;
    t.S_t = c.S_c_prime + R_o * R_o * (goal.psi_f + psi_u - c.psi_prime);
    return t;
  }
};

inline constexpr double kIncircleClamp = 1e-6;

/// Radius of the circle inscribed in the isosceles triangle built on the u-feed angle.
inline double incircle_radius(double u_prime, double R_o, double mu_r) {
  double u = std::min(std::abs(u_prime), kPi);
  if (std::abs(u - kPi / 2) < kIncircleClamp) u = kPi / 2 - kIncircleClamp;
  const double r_i = R_o / std::cos(u);
  const double l_i = 2.0 * R_o * std::tan(u);
  const double S_i = (2.0 * r_i + l_i) / 2.0;
  const double rad = S_i == 0.0 ? 0.0
                                : safe_sqrt((S_i - r_i) * (S_i - r_i) * (S_i - l_i) / S_i,
                                            "incircle_radius");
  return u < kPi / 2 ? rad : R_o / mu_r + rad;
}

inline double projection_angle(double v_of, double zeta_prime, double R_o, double R_t) {
  if (R_t == 0.0) throw PoleError("projection_angle: R_t = 0");
  const double a = v_of + zeta_prime;
  if (std::abs(std::cos(a)) <= 1e-9) throw PoleError("projection_angle: v_of + zeta' at pi/2");
  return std::atan(R_o * std::tan(a) / R_t);
}

inline VirtualSurfaceState virtual_surface(const Configuration &x, const GoalSpec &goal,
                                           const TuningState &tune, double R_o, double mu_r,
                                           bool v_shift = false) {
  VirtualSurfaceState vs;
  vs.u_prime = wrap_angle(goal.Psi_f.u_o - x.u_o);
  vs.v_prime = wrap_angle(goal.Psi_f.v_o - x.v_o);
  vs.R_i = incircle_radius(vs.u_prime, R_o, mu_r);
  vs.R_a = tune.R_a();
  vs.R_n = (vs.R_i + vs.R_a) / 2.0;
  vs.R_g = vs.R_n;
  vs.R_t = vs.R_n + vs.R_g;
  vs.zeta_prime = tune.zeta_prime();
  const double v_of = goal.Psi_f.v_o + (v_shift ? kPi / 2 : 0.0);
  vs.zeta = projection_angle(v_of, vs.zeta_prime, R_o, vs.R_t);
  return vs;
}

/// Steering angle theta before the spin deviation is subtracted.
inline double steering_base(double beta_s, double gamma_s, double G_f, double R_o) {
  if (beta_s == 0.0) throw SteeringSingularity("steering angle undefined (beta_s = 0)");
  const double tg = std::tan(G_f);
  const double arg = (1.0 / beta_s) * ((1.0 / R_o) * (1.0 - tg) + gamma_s * (-1.0 + tg) - beta_s * tg);
  if (std::isnan(arg)) throw SteeringSingularity("steering angle undefined (beta_s = 0)");
  return std::atan2(1.0, arg);
}

/// Offset added to phi: pi on the half-plane -3pi/4 < G_f < pi/4.
inline double steering_offset(double G_f) {
  return (G_f > -3.0 * kPi / 4 && G_f < kPi / 4) ? kPi : 0.0;
}

/// Arc-length inputs (alpha_s, beta_s, gamma_s) only; theta, phi and delta stay zero.
inline ControlInputs arc_length_inputs(const GoalSpec &goal, const VirtualSurfaceState &vs, double R_o,
                                       bool v_shift = false) {
  const double v_of = goal.Psi_f.v_o + (v_shift ? kPi / 2 : 0.0);
  if (std::abs(std::cos(v_of)) <= 1e-9) throw PoleError("control_inputs: |v_of| at pi/2");
  ControlInputs ci;
  ci.alpha_s = std::tan(v_of) / R_o - std::tan(vs.zeta) / vs.R_t;
  const double cvp = std::cos(vs.v_prime);
  ci.beta_s = std::sqrt(std::abs(R_o * R_o * cvp * cvp - vs.R_t * vs.R_t)) / (R_o * R_o);
  ci.gamma_s = (vs.R_n - R_o) / (vs.R_n * R_o);
  return ci;
}

inline ControlInputs control_inputs(const Configuration &x, const GoalSpec &goal,
                                    const VirtualSurfaceState &vs, double R_o, double psi_q = 0.0,
                                    bool v_shift = false) {
  (void)x;
  ControlInputs ci = arc_length_inputs(goal, vs, R_o, v_shift);
  ci.G_f = goal.heading();
  ci.psi_q = psi_q;
  ci.theta = steering_base(ci.beta_s, ci.gamma_s, ci.G_f, R_o) - psi_q;
  ci.phi = psi_q + steering_offset(ci.G_f);
  return ci;
}

inline double spin_deviation(double psi_t, double psi_0, const SpinTracker &tracker, double R_o) {
  return (tracker.S_t - R_o * R_o * (psi_t - psi_0)) / (R_o * R_o);
}

/// How the remaining plane distance enters the rolling rate.
enum class RateDistance {
  euclidean, ///< |P_f - P|
  projected, ///< max(0, (P_f - P) . g), g the unit heading from P_0 to P_f
};

inline double remaining_distance(const Configuration &x, const GoalSpec &goal, RateDistance mode) {
  const double dx = goal.P_f.u_s - x.u_s, dy = goal.P_f.v_s - x.v_s;
  if (mode == RateDistance::euclidean) return std::hypot(dx, dy);
  const double gx = goal.P_f.u_s - goal.P_0.u_s, gy = goal.P_f.v_s - goal.P_0.v_s;
  const double gn = std::hypot(gx, gy);
  if (gn == 0.0) return std::hypot(dx, dy);
  return std::max(0.0, (dx * gx + dy * gy) / gn);
}

/// Rate factor c = remaining distance * |v_of * u'|, so that delta = c / |T|.
inline double rate_factor(const Configuration &x, const GoalSpec &goal, double v_of,
                          RateDistance mode = RateDistance::projected) {
  const double u_prime = wrap_angle(goal.Psi_f.u_o - x.u_o);
  return remaining_distance(x, goal, mode) * std::abs(v_of * u_prime);
}

inline double rolling_rate(const Configuration &x, const GoalSpec &goal, double T, double v_of,
                           RateDistance mode = RateDistance::projected) {
  if (T == 0.0) throw InvalidGoal("rolling_rate: T = 0");
  return rate_factor(x, goal, v_of, mode) / std::abs(T);
}

} // namespace rollplan

#endif // ROLLPLAN_CONTROLLER_HPP
