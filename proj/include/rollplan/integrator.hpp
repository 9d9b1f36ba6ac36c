#ifndef ROLLPLAN_INTEGRATOR_HPP
#define ROLLPLAN_INTEGRATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "rollplan/errors.hpp"

namespace rollplan {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  /// Zero means t_f / 500.
  double max_step = 0.0;
  std::size_t min_samples = 2000;
  std::size_t max_steps = 50000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_failures = 0;
};

/// Dormand-Prince 5(4) with cubic Hermite fill-in between accepted steps.
///
/// Only the first E components enter the error norm. The sink is called as
/// sink(t, y, dydt) on every output sample in increasing t, starting at t0.
template <std::size_t N, std::size_t E = N, class Rhs, class Sink>
IntegratorStats dopri5(Rhs &&rhs, double t0, std::array<double, N> y0, double t_f,
                       const IntegratorOptions &opt, Sink &&sink) {
  static_assert(E <= N);
  using V = std::array<double, N>;
  if (!(t_f > t0)) throw StepFailure("dopri5: t_f must exceed t0");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw StepFailure("dopri5: tolerances must be positive");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t_f - t0;
  const double hmax = opt.max_step > 0.0 ? opt.max_step : span / 500.0;
  const double grid_dt = opt.min_samples > 1 ? span / static_cast<double>(opt.min_samples) : span;

  IntegratorStats st;
  double t = t0;
  V y = y0;
  V k1;
  rhs(t, y, k1);
  sink(t, y, k1);
  std::size_t next_grid = 1;

  double h = std::min(hmax, 0.01 * span);
  V k2, k3, k4, k5, k6, k7, yt, ynew;
  std::string last_error;

  while (t < t_f) {
    if (st.accepted + st.rejected > opt.max_steps) throw StepFailure("dopri5: step budget exhausted");
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw StepFailure("dopri5: step size underflow at t = " + std::to_string(t) +
                        (last_error.empty() ? "" : " (" + last_error + ")"));
    bool last = false;
    if (t + h >= t_f) {
      h = t_f - t;
      last = true;
    }
    bool ok = true;
    try {
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
      rhs(t + c2 * h, yt, k2);
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * h, yt, k3);
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * h, yt, k4);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * h, yt, k5);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(t + h, yt, k6);
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs(t + h, ynew, k7);
    } catch (const std::exception &ex) {
      ok = false;
      last_error = ex.what();
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        if (!std::isfinite(ynew[i]) || !std::isfinite(k7[i])) {
          ok = false;
          last_error = "non-finite state";
          break;
        }
    }
    if (!ok) {
      ++st.rhs_failures;
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < E; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(E));

    if (err <= 1.0) {
      const double t_new = last ? t_f : t + h;
      // Hermite fill-in for uniform grid points strictly inside the step.
      while (next_grid < opt.min_samples) {
        const double tg = t0 + grid_dt * static_cast<double>(next_grid);
        if (tg >= t_new) break;
        if (tg > t) {
          const double th = (tg - t) / h;
          const double h00 = 2 * th * th * th - 3 * th * th + 1, h10 = th * th * th - 2 * th * th + th;
          const double h01 = -2 * th * th * th + 3 * th * th, h11 = th * th * th - th * th;
          V yi, fi;
          for (std::size_t i = 0; i < N; ++i) {
            yi[i] = h00 * y[i] + h10 * h * k1[i] + h01 * ynew[i] + h11 * h * k7[i];
            fi[i] = (1 - th) * k1[i] + th * k7[i];
          }
          sink(tg, yi, fi);
        }
        ++next_grid;
      }
      t = t_new;
      y = ynew;
      k1 = k7;
      ++st.accepted;
      sink(t, y, k1);
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(hmax, h * fac);
    } else {
      ++st.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return st;
}

} // namespace rollplan

#endif // ROLLPLAN_INTEGRATOR_HPP
