#ifndef ROLLPLAN_TESTS_SUPPORT_HPP
#define ROLLPLAN_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "rollplan/rollplan.hpp"

namespace rp_test {

using namespace rollplan;

inline GoalSpec case_goal() {
  GoalSpec g;
  g.P_f = {3.0, 3.2};
  g.Psi_f = {-kPi / 2 - 0.8, 0.8};
  g.psi_f = 0.8;
  return g;
}

inline GoalSpec multispin_goal(double psi_f) {
  GoalSpec g;
  g.P_f = {3.0, 3.2};
  g.Psi_f = {0.6, 0.7};
  g.psi_f = psi_f;
  return g;
}

inline PlanParams case_params() {
  PlanParams p;
  p.R_o = 0.5;
  p.mu_r = 4.0;
  p.t_f = 15.0;
  p.time.t_f = 15.0;
  return p;
}

/// Tunables found by a grid scan over (zeta_q, R_q) that meet all four case-study tolerances.
inline TuningState reference_tuning() {
  TuningState t;
  t.zeta_q = -0.5586;
  t.R_q = 0.0155;
  return t;
}

inline Trajectory solve(const GoalSpec &g, const TuningState &t, const PlanParams &p) {
  const KinematicsContext ctx = KinematicsContext::make(g, t, p.R_o, p.mu_r, p.time, p.variant, p.v_shift);
  const Configuration x0{g.P_0.u_s, g.P_0.v_s, g.Psi_0.u_o, g.Psi_0.v_o, g.psi_0};
  return integrate(x0, ctx, p.t_f, p.integrator);
}

struct Rng {
  std::mt19937_64 gen{20240611};
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
};

/// Embedded point rotated about the vertical axis by -g, written in chart-independent terms.
inline Vec3 rotate_about_vertical(const Vec3 &p, double g) {
  const double X = -p[0], Y = p[1];
  const double Xr = std::cos(g) * X + std::sin(g) * Y;
  const double Yr = -std::sin(g) * X + std::cos(g) * Y;
  return {-Xr, Yr, p[2]};
}

/// Inradius of the isosceles triangle with height R_o and half-apex angle u, as area over semiperimeter.
inline double incircle_oracle(double u, double R_o) {
  const double base = 2.0 * R_o * std::tan(u);
  const double side = R_o / std::cos(u);
  const double area = base * R_o / 2.0;
  return area / ((2.0 * side + base) / 2.0);
}

/// Midpoint-rule integral of the Gaussian curvature over a polar cap of half-angle theta_c.
inline double curvature_integral(double theta_c, double R_o, int n = 400) {
  const double kappa = 1.0 / (R_o * R_o);
  double sum = 0.0;
  const double dth = theta_c / n, dph = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * dth;
    for (int j = 0; j < n; ++j) sum += kappa * R_o * R_o * std::sin(th) * dth * dph;
  }
  return sum;
}

} // namespace rp_test

#endif
