#ifndef ROLLPLAN_REACHABILITY_HPP
#define ROLLPLAN_REACHABILITY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rollplan/angles.hpp"
#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"

namespace rollplan {

/// Initial and desired configuration of a planning request.
struct GoalSpec {
  PlanePoint P_f;
  SpherePoint Psi_f;
  double psi_f = 0.0;
  PlanePoint P_0;
  SpherePoint Psi_0;
  double psi_0 = 0.0;

  double travel() const { return plane_distance(P_f, P_0); }
  double heading() const { return std::atan2(P_f.v_s - P_0.v_s, P_f.u_s - P_0.u_s); }
};

struct CapGeometry {
  double S_t = 0.0;
  double S_c_prime = 0.0;
  double dS = 0.0;
  double h = 0.0;
  double h_c = 0.0;
  double h_c_prime = 0.0;
  double a_c = 0.0;
  double a_c_prime = 0.0;
  double alpha = 0.0;
  double alpha_prime = kPi;
  double Q_of = 0.0;
  double psi_prime = 0.0;
  double kappa_o = 0.0;
};

/// Reading of the sector-angle formula for non-negative area change.
enum class AlphaForm {
  as_printed, ///< (1 - 2 asin(a'_c/a_c)) / 2pi
  full_turn,  ///< (2pi - 2 asin(a'_c/a_c)) / 2pi
};

inline const char *to_string(AlphaForm f) {
  return f == AlphaForm::as_printed ? "as_printed" : "full_turn";
}

inline AlphaForm alpha_form_from_string(const std::string &s) {
  if (s == "as_printed") return AlphaForm::as_printed;
  if (s == "full_turn") return AlphaForm::full_turn;
  throw ConfigError("unknown alpha_form '" + s + "'");
}

inline constexpr AlphaForm kDefaultAlphaForm = AlphaForm::full_turn;

struct DistanceReport {
  double d = 0.0;
  CapGeometry cap;
  bool feasible = false;
  double slack = 0.0;
  /// Travel at least one sphere circumference lifts the constraint.
  bool waived = false;
};

/// Cap under the closed circle through the goal contact point; always computable.
inline CapGeometry base_cap(SpherePoint Psi_f, double R_o) {
  CapGeometry c;
  c.kappa_o = 1.0 / (R_o * R_o);
  const double uf = Psi_f.u_o, vf = Psi_f.v_o;
  c.h = R_o * (1.0 - std::cos(uf) * std::cos(vf));
  const double sv = std::sin(vf), su = std::sin(uf), cv = std::cos(vf);
  c.a_c_prime = std::sqrt(c.h * c.h + R_o * R_o * (sv * sv + su * su * cv * cv));
  if (c.h <= R_o) {
    c.Q_of = c.a_c_prime > 0.0 ? kPi - 2.0 * safe_acos(c.h / c.a_c_prime, "Q_of") : 0.0;
  } else {
    c.Q_of = kPi / 2 - safe_asin((c.h - R_o) / R_o, "Q_of");
  }
  if (c.a_c_prime <= 2.0 * R_o)
    c.h_c_prime = R_o * (1.0 - std::cos(c.Q_of / 2));
  else
    c.h_c_prime = R_o * (1.0 - c.a_c_prime * std::cos(c.Q_of / 2) / (2.0 * R_o));
  c.alpha_prime = kPi;
  const double half = c.a_c_prime / 2;
  c.S_c_prime = (c.alpha_prime / (2.0 * kPi)) * (half * half + c.h_c_prime * c.h_c_prime);
  c.psi_prime = cap_spin_change(c.S_c_prime, R_o);
  return c;
}

/// Base cap plus the area change and the resulting cap (S_t, h_c, a_c); stops before the sector angle.
inline CapGeometry area_chain(const GoalSpec &goal, double R_o) {
  CapGeometry c = base_cap(goal.Psi_f, R_o);
  c.dS = R_o * R_o * (goal.psi_f - c.psi_prime);
  c.S_t = 2.0 * c.S_c_prime + c.dS;
  c.h_c = c.S_t / (2.0 * kPi * R_o);
  c.a_c = 2.0 * safe_sqrt(c.S_t / kPi - c.h_c * c.h_c, "a_c");
  return c;
}

/// Sector fraction alpha from the base ratio a'_c / a_c and the sign of the area change.
inline double sector_fraction(double ratio, double dS, AlphaForm form = kDefaultAlphaForm) {
  const double as = safe_asin(ratio, "alpha");
  if (dS < 0.0) return 2.0 * as / (2.0 * kPi);
  const double lead = form == AlphaForm::as_printed ? 1.0 : 2.0 * kPi;
  return (lead - 2.0 * as) / (2.0 * kPi);
}

inline DistanceReport min_distance(const GoalSpec &goal, double R_o,
                                   AlphaForm form = kDefaultAlphaForm) {
  if (!(R_o > 0.0)) throw InvalidGoal("min_distance: R_o must be positive");
  if (goal.Psi_0.u_o != 0.0 || goal.Psi_0.v_o != 0.0)
    throw InvalidGoal("min_distance: initial contact point must be (0, 0)");
  if (goal.psi_0 != 0.0) throw InvalidGoal("min_distance: initial spin must be 0");

  DistanceReport r;
  CapGeometry c = area_chain(goal, R_o);
  if (c.a_c <= 0.0) throw NumericalDomain("min_distance: degenerate cap base a_c = 0");
  c.alpha = sector_fraction(c.a_c_prime / c.a_c, c.dS, form);
  r.d = 2.0 * kPi * c.a_c * c.alpha;
  r.cap = c;
  const double L = goal.travel();
  r.slack = L - r.d;
  r.feasible = r.d < L;
  r.waived = L >= 2.0 * kPi * R_o;
  return r;
}

/// One grid cell of the normalized distance surface; empty when the chain has no value.
struct DistanceCell {
  double u = 0.0;
  double psi = 0.0;
  std::optional<double> d_over_R;
  std::string error;
};

inline std::vector<DistanceCell> distance_surface(const std::vector<double> &u_grid, double v_fixed,
                                                  const std::vector<double> &psi_list, double R_o,
                                                  AlphaForm form = kDefaultAlphaForm) {
  if (u_grid.empty() || psi_list.empty()) throw InvalidGoal("distance_surface: empty grid");
  std::vector<DistanceCell> out;
  out.reserve(u_grid.size() * psi_list.size());
  for (double psi : psi_list) {
    for (double u : u_grid) {
      DistanceCell cell{u, psi, std::nullopt, {}};
      GoalSpec g;
      g.Psi_f = {u, v_fixed};
      g.psi_f = psi;
      try {
        cell.d_over_R = min_distance(g, R_o, form).d / R_o;
      } catch (const Error &e) {
        cell.error = e.what();
      }
      out.push_back(cell);
    }
  }
  return out;
}

} // namespace rollplan

#endif // ROLLPLAN_REACHABILITY_HPP
