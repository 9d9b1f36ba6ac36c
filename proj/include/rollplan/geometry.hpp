#ifndef ROLLPLAN_GEOMETRY_HPP
#define ROLLPLAN_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <utility>

#include "rollplan/angles.hpp"
#include "rollplan/errors.hpp"

namespace rollplan {

using Vec3 = std::array<double, 3>;

/// Contact parameters on the sphere chart.
struct SpherePoint {
  double u_o = 0.0;
  double v_o = 0.0;
};

/// Contact parameters on the plane chart.
struct PlanePoint {
  double u_s = 0.0;
  double v_s = 0.0;
};

struct CurvatureTriple {
  double k_g = 0.0;
  double k_n = 0.0;
  double tau_g = 0.0;
};

/// Curvatures along the u and v coordinate directions.
struct SurfaceCurvatures {
  CurvatureTriple u;
  CurvatureTriple v;
};

inline SpherePoint normalized(SpherePoint p) { return {wrap_angle(p.u_o), wrap_angle(p.v_o)}; }

inline double plane_distance(PlanePoint a, PlanePoint b) {
  return std::hypot(a.u_s - b.u_s, a.v_s - b.v_s);
}

inline Vec3 sphere_embed(SpherePoint p, double R_o) {
  const double cv = std::cos(p.v_o);
  return {-R_o * std::sin(p.u_o) * cv, R_o * std::sin(p.v_o), -R_o * std::cos(p.u_o) * cv};
}

inline double norm(const Vec3 &a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

inline SurfaceCurvatures sphere_curvatures(SpherePoint p, double R_o) {
  if (std::abs(std::abs(wrap_angle(p.v_o)) - kPi / 2) <= 1e-9)
    throw PoleError("sphere_curvatures: |v_o| at pi/2");
  SurfaceCurvatures c;
  c.u = {std::tan(p.v_o) / R_o, 1.0 / R_o, 0.0};
  c.v = {0.0, 1.0 / R_o, 0.0};
  return c;
}

/// The plane carries no curvature at all.
inline SurfaceCurvatures plane_curvatures() { return {}; }

/// Geodesic torsion of the helicoid virtual surface, absolute-difference form.
inline double helicoid_torsion(double v_v, double R_v, double R_t) {
  const double c = std::cos(v_v);
  return std::sqrt(std::abs(R_v * R_v * c * c - R_t * R_t)) / (R_v * R_v);
}

/// Sum form of the helicoid torsion, kept for the surface derivation checks.
inline double helicoid_torsion_plus(double v_v, double R_v, double R_t) {
  const double c = std::cos(v_v);
  return std::sqrt(R_v * R_v * c * c + R_t * R_t) / (R_v * R_v);
}

/// Full curvature triple of the helicoid surface (sum form).
inline CurvatureTriple helicoid_curvatures(double v_v, double R_v, double R_t) {
  const double c = std::cos(v_v), s = std::sin(v_v);
  const double den = R_v * R_v * c * c + R_t * R_t;
  return {R_v * c * s / den, 1.0 / R_v, helicoid_torsion_plus(v_v, R_v, R_t)};
}

/// Spin change produced by enclosing area S on a sphere of radius R_o.
inline double cap_spin_change(double S, double R_o) { return S / (R_o * R_o); }

/// Rotate a contact point about the vertical axis so the goal direction G_f maps onto pi/4.
inline SpherePoint rotate_to_goal_frame(SpherePoint p, double G_f) {
  const double g = G_f - kPi / 4;
  const double su = std::sin(p.u_o), cu = std::cos(p.u_o);
  const double sv = std::sin(p.v_o), cv = std::cos(p.v_o);
  const double cg = std::cos(g), sg = std::sin(g);

  const double y_r = -sg * su * cv + cg * sv;
  const double x_r = cg * su * cv + sg * sv;
  double v_r = safe_asin(y_r, "rotate_to_goal_frame v");
  const double cvr = std::hypot(x_r, cu * cv);
  double u_r = cvr < 1e-12 ? 0.0 : safe_asin(x_r / cvr, "rotate_to_goal_frame u");

  const double au = std::abs(wrap_angle(p.u_o));
  const double av = std::abs(wrap_angle(p.v_o));
  const double h = kPi / 2;
  if ((av <= h && au >= h) || (av > h && au < h)) {
    u_r = -u_r;
    v_r = kPi - v_r;
  }
  return normalized({u_r, v_r});
}

struct QAngles {
  double zx = 0.0;
  double zy = 0.0;
};

inline QAngles zx_zy_angles(SpherePoint p) {
  return {std::abs(p.u_o), std::abs(std::atan2(std::sin(p.u_o) * std::cos(p.v_o), std::sin(p.v_o)))};
}

/// Euclidean distance between two contact points through the sphere.
inline double chord_error(SpherePoint a, SpherePoint b, double R_o) {
  const double dv = std::sin(a.v_o) - std::sin(b.v_o);
  const double dz = std::cos(a.u_o) * std::cos(a.v_o) - std::cos(b.u_o) * std::cos(b.v_o);
  const double dx = std::sin(a.u_o) * std::cos(a.v_o) - std::sin(b.u_o) * std::cos(b.v_o);
  return R_o * std::sqrt(dv * dv + dz * dz + dx * dx);
}

} // namespace rollplan

#endif // ROLLPLAN_GEOMETRY_HPP
