#ifndef ROLLPLAN_TIMESCALE_HPP
#define ROLLPLAN_TIMESCALE_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "rollplan/controller.hpp"
#include "rollplan/errors.hpp"

namespace rollplan {

enum class TimeMode { constant, smooth };

inline const char *to_string(TimeMode m) { return m == TimeMode::constant ? "constant" : "smooth"; }

inline TimeMode time_mode_from_string(const std::string &s) {
  if (s == "constant") return TimeMode::constant;
  if (s == "smooth") return TimeMode::smooth;
  throw ConfigError("unknown timescale mode '" + s + "'");
}

struct TimeScaleSpec {
  TimeMode mode = TimeMode::constant;
  double T_const = 1.0;
  double a = 12.91;
  double T_s = 160.0;
  double t_f = 15.0;
};

/// Rest-to-rest angular velocity profile.
inline double smooth_velocity(double t, double a, double T_s) {
  const double tau = t / T_s;
  const double t4 = tau * tau * tau * tau;
  return a * t4 * (140.0 + tau * (-420.0 + tau * (420.0 - 140.0 * tau)));
}

inline double smooth_velocity_rate(double t, double a, double T_s) {
  const double tau = t / T_s;
  const double t3 = tau * tau * tau;
  return a * t3 * (560.0 + tau * (-2100.0 + tau * (2520.0 - 980.0 * tau))) / T_s;
}

inline constexpr double kSingularAlpha = 1e-12;

/// Time scale T at time t; smooth mode uses c * omega_s / alpha_s.
inline double effective_T(double t, const Configuration &x, const GoalSpec &goal,
                          const TimeScaleSpec &spec, double alpha_s,
                          RateDistance mode = RateDistance::projected) {
  if (spec.mode == TimeMode::constant) return spec.T_const;
  if (std::abs(alpha_s) < kSingularAlpha) throw SingularScale("effective_T: alpha_s vanishes");
  const double c = rate_factor(x, goal, goal.Psi_f.v_o, mode);
  return c * smooth_velocity(t, spec.a, spec.T_s) / alpha_s;
}

/// Rolling rate under a time-scale spec. Smooth mode scales as c^2 omega_s / |alpha_s|.
/// Returns true in fell_back when smooth mode had to use the constant scale.
inline double scaled_rolling_rate(double t, const Configuration &x, const GoalSpec &goal,
                                  const TimeScaleSpec &spec, double alpha_s, bool &fell_back,
                                  RateDistance mode = RateDistance::projected) {
  fell_back = false;
  const double c = rate_factor(x, goal, goal.Psi_f.v_o, mode);
  if (spec.mode == TimeMode::constant) return c / std::abs(spec.T_const);
  if (std::abs(alpha_s) < kSingularAlpha) {
    fell_back = true;
    return c / std::abs(spec.T_const);
  }
  const double tc = std::min(std::max(t, 0.0), spec.T_s);
  return c * c * smooth_velocity(tc, spec.a, spec.T_s) / std::abs(alpha_s);
}

} // namespace rollplan

#endif // ROLLPLAN_TIMESCALE_HPP
