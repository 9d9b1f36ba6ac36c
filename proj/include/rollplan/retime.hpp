#ifndef ROLLPLAN_RETIME_HPP
#define ROLLPLAN_RETIME_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"
#include "rollplan/kinematics.hpp"
#include "rollplan/planner.hpp"
#include "rollplan/timescale.hpp"

namespace rollplan {

inline constexpr double kPathTolerance = 1e-4;

namespace detail {

/// Value at s of the cubic through four (s, y) nodes; linear between the middle two when nodes crowd.
template <class Get>
double interp_arc(const std::vector<Sample> &A, std::size_t j, double s, Get get) {
  const std::size_t n = A.size();
  const Sample &p = A[j];
  const Sample &q = A[std::min(j + 1, n - 1)];
  const double ds = q.s_plane - p.s_plane;
  const double f = ds > 0.0 ? std::clamp((s - p.s_plane) / ds, 0.0, 1.0) : 0.0;
  const double lin = get(p) + f * (get(q) - get(p));
  if (j == 0 || j + 2 >= n) return lin;
  const double x[4] = {A[j - 1].s_plane, p.s_plane, q.s_plane, A[j + 2].s_plane};
  for (int i = 0; i < 3; ++i)
    if (!(x[i + 1] - x[i] > 1e-9)) return lin;
  const double y[4] = {get(A[j - 1]), get(p), get(q), get(A[j + 2])};
  double out = 0.0;
  for (int i = 0; i < 4; ++i) {
    double w = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != i) w *= (s - x[k]) / (x[i] - x[k]);
    out += w * y[i];
  }
  return out;
}

} // namespace detail

/// Largest distance between two runs' plane and sphere paths at equal plane arc length,
/// over the arc range both runs cover.
inline double path_deviation(const Trajectory &a, const Trajectory &b) {
  if (a.empty() || b.empty()) return 0.0;
  const double s_end = std::min(a.back().s_plane, b.back().s_plane);
  double worst = 0.0;
  std::size_t j = 0;
  const auto &A = a.samples;
  for (const Sample &sb : b.samples) {
    const double s = sb.s_plane;
    if (s > s_end) break;
    while (j + 1 < A.size() && A[j + 1].s_plane < s) ++j;
    const double us = detail::interp_arc(A, j, s, [](const Sample &x) { return x.x.u_s; });
    const double vs = detail::interp_arc(A, j, s, [](const Sample &x) { return x.x.v_s; });
    worst = std::max(worst, std::hypot(us - sb.x.u_s, vs - sb.x.v_s));
    for (int k = 0; k < 3; ++k) {
      const double xk = detail::interp_arc(A, j, s, [k](const Sample &x) { return x.xyz[k]; });
      worst = std::max(worst, std::abs(xk - sb.xyz[k]));
    }
  }
  return worst;
}

/// Re-integrate a tuned plan under a different time parameterization.
inline Trajectory retime(const GoalSpec &goal, const PlanParams &params, const TuningState &tuning,
                         const Trajectory &reference, const TimeScaleSpec &spec,
                         double tolerance = kPathTolerance) {
  const KinematicsContext ctx =
      KinematicsContext::make(goal, tuning, params.R_o, params.mu_r, spec, params.variant, params.v_shift);
  const Configuration x0{goal.P_0.u_s, goal.P_0.v_s, goal.Psi_0.u_o, goal.Psi_0.v_o, goal.psi_0};
  IntegratorOptions opt = params.integrator;
  if (opt.max_step > 0.0) opt.max_step *= spec.t_f / params.t_f;
  Trajectory out = integrate(x0, ctx, spec.t_f, opt);
  const double dev = path_deviation(reference, out);
  if (!(dev <= tolerance))
    throw PathDrift("retime: paths differ by " + std::to_string(dev) + " over matched arc length");
  return out;
}

inline Trajectory retime(const PlanResult &result, const GoalSpec &goal, const PlanParams &params,
                         const TimeScaleSpec &spec, double tolerance = kPathTolerance) {
  return retime(goal, params, result.tuning, result.trajectory, spec, tolerance);
}

/// Largest sphere angular speed (|du_o|, |dv_o|, |dpsi|) at a sample.
inline double angular_speed(const Sample &s, const GoalSpec &goal, const PlanParams &params,
                            const TuningState &tuning, const TimeScaleSpec &spec) {
  const KinematicsContext ctx =
      KinematicsContext::make(goal, tuning, params.R_o, params.mu_r, spec, params.variant, params.v_shift);
  const StateDerivative d = rhs(s.t, s.x, ctx);
  return std::max({std::abs(d.du_o), std::abs(d.dv_o), std::abs(d.dpsi)});
}

} // namespace rollplan

#endif // ROLLPLAN_RETIME_HPP
