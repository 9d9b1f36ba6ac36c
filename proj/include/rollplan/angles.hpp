#ifndef ROLLPLAN_ANGLES_HPP
#define ROLLPLAN_ANGLES_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "rollplan/errors.hpp"

namespace rollplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kClampBand = 1e-9;

/// Wrap an angle into [-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r == -kPi) r = kPi;
  return r;
}

inline double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// Clamp an inverse-trig argument that left [-1, 1] by rounding only.
inline double clamp_unit(double x, const char *what) {
  if (std::isnan(x)) throw DomainError(std::string(what) + ": argument is NaN");
  if (x > 1.0) {
    if (x - 1.0 > kClampBand)
      throw DomainError(std::string(what) + ": argument " + std::to_string(x) + " > 1");
    return 1.0;
  }
  if (x < -1.0) {
    if (-1.0 - x > kClampBand)
      throw DomainError(std::string(what) + ": argument " + std::to_string(x) + " < -1");
    return -1.0;
  }
  return x;
}

inline double safe_asin(double x, const char *what = "asin") {
  return std::asin(clamp_unit(x, what));
}

inline double safe_acos(double x, const char *what = "acos") {
  return std::acos(clamp_unit(x, what));
}

/// Square root that tolerates tiny negative radicands and rejects larger ones.
inline double safe_sqrt(double x, const char *what = "sqrt") {
  if (std::isnan(x)) throw NumericalDomain(std::string(what) + ": radicand is NaN");
  if (x < 0.0) {
    if (x < -kClampBand)
      throw NumericalDomain(std::string(what) + ": negative radicand " + std::to_string(x));
    return 0.0;
  }
  return std::sqrt(x);
}

} // namespace rollplan

#endif // ROLLPLAN_ANGLES_HPP
