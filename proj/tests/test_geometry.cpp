#include <gtest/gtest.h>

#include "support.hpp"

using namespace rollplan;
using rp_test::Rng;

TEST(SphereEmbed, ChartPole) {
  const Vec3 p = sphere_embed({0.0, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(p[0], 0.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
  EXPECT_DOUBLE_EQ(p[2], -0.5);
}

TEST(SphereEmbed, AxisCase) {
  const Vec3 p = sphere_embed({kPi / 2, 0.0}, 1.0);
  EXPECT_NEAR(p[0], -1.0, 1e-15);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
}

TEST(SphereEmbed, NormIsRadius) {
  Rng r;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint p{r.uniform(-kPi, kPi), r.uniform(-kPi, kPi)};
    EXPECT_NEAR(norm(sphere_embed(p, 0.5)), 0.5, 0.5e-12);
  }
}

TEST(SphereCurvatures, Equator) {
  const SurfaceCurvatures c = sphere_curvatures({0.3, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(c.u.k_n, 2.0);
  EXPECT_DOUBLE_EQ(c.v.k_n, 2.0);
  EXPECT_DOUBLE_EQ(c.u.tau_g, 0.0);
  EXPECT_DOUBLE_EQ(c.v.tau_g, 0.0);
  EXPECT_DOUBLE_EQ(c.u.k_g, 0.0);
  EXPECT_DOUBLE_EQ(c.v.k_g, 0.0);
}

TEST(SphereCurvatures, QuarterLatitude) {
  EXPECT_NEAR(sphere_curvatures({0.0, kPi / 4}, 1.0).u.k_g, 1.0, 1e-15);
}

TEST(SphereCurvatures, Pole) {
  EXPECT_THROW(sphere_curvatures({0.0, kPi / 2 - 1e-12}, 0.5), PoleError);
  EXPECT_THROW(sphere_curvatures({0.0, -kPi / 2}, 0.5), PoleError);
}

TEST(PlaneCurvatures, AllZero) {
  const SurfaceCurvatures c = plane_curvatures();
  EXPECT_EQ(c.u.k_g + c.u.k_n + c.u.tau_g + c.v.k_g + c.v.k_n + c.v.tau_g, 0.0);
}

TEST(HelicoidTorsion, Examples) {
  EXPECT_DOUBLE_EQ(helicoid_torsion(0.0, 1.0, 0.0), 1.0);
  EXPECT_NEAR(helicoid_torsion(0.0, 0.5, 0.3), 1.6, 1e-14);
  for (double v : {0.1, 0.7, 1.3}) EXPECT_NEAR(helicoid_torsion(v, 0.8, 0.8 * std::cos(v)), 0.0, 1e-7);
}

TEST(HelicoidTorsion, EvenAndContinuous) {
  Rng r;
  for (int i = 0; i < 200; ++i) {
    const double v = r.uniform(-kPi, kPi), Rv = r.uniform(0.1, 2.0), Rt = r.uniform(0.0, 2.0);
    EXPECT_DOUBLE_EQ(helicoid_torsion(v, Rv, Rt), helicoid_torsion(-v, Rv, Rt));
    EXPECT_NEAR(helicoid_torsion(v, Rv, Rt), helicoid_torsion(v, Rv, Rt + 1e-10), 1e-4);
  }
}

TEST(HelicoidTorsion, SumFormMatchesTripleAndDominates) {
  Rng r;
  for (int i = 0; i < 100; ++i) {
    const double v = r.uniform(-1.5, 1.5), Rv = r.uniform(0.1, 2.0), Rt = r.uniform(0.0, 2.0);
    EXPECT_EQ(helicoid_curvatures(v, Rv, Rt).tau_g, helicoid_torsion_plus(v, Rv, Rt));
    EXPECT_GE(helicoid_torsion_plus(v, Rv, Rt), helicoid_torsion(v, Rv, Rt));
  }
}

TEST(CapSpinChange, FullSphereAndZero) {
  EXPECT_NEAR(cap_spin_change(4.0 * kPi * 0.25, 0.5), 4.0 * kPi, 1e-14);
  EXPECT_EQ(cap_spin_change(0.0, 0.5), 0.0);
}

TEST(CapSpinChange, Linear) {
  EXPECT_NEAR(cap_spin_change(0.3 + 0.7, 0.5), cap_spin_change(0.3, 0.5) + cap_spin_change(0.7, 0.5), 1e-14);
  EXPECT_NEAR(cap_spin_change(3.0 * 0.2, 0.5), 3.0 * cap_spin_change(0.2, 0.5), 1e-14);
}

TEST(CapSpinChange, MatchesCurvatureQuadrature) {
  const double R = 0.5;
  for (double th : {0.3, 1.0, kPi / 2, 2.4}) {
    const double h = R * (1.0 - std::cos(th)), base_r = R * std::sin(th);
    const double area = kPi * (base_r * base_r + h * h);
    EXPECT_NEAR(cap_spin_change(area, R), rp_test::curvature_integral(th, R), 1e-3) << "theta_c " << th;
  }
}

TEST(RotateToGoalFrame, IdentityAtQuarterTurn) {
  Rng r;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint p{r.uniform(-kPi, kPi), r.uniform(-kPi / 2 + 1e-3, kPi / 2 - 1e-3)};
    const SpherePoint q = rotate_to_goal_frame(p, kPi / 4);
    const Vec3 a = sphere_embed(p, 1.0), b = sphere_embed(q, 1.0);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(RotateToGoalFrame, MatchesRotationMatrix) {
  Rng r;
  const double R = 0.5;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint p{r.uniform(-kPi, kPi), r.uniform(-kPi, kPi)};
    const double G = r.uniform(-kPi, kPi);
    const Vec3 want = rp_test::rotate_about_vertical(sphere_embed(p, R), G - kPi / 4);
    const Vec3 got = sphere_embed(rotate_to_goal_frame(normalized(p), G), R);
    for (int k = 0; k < 3; ++k) ASSERT_NEAR(got[k], want[k], 1e-9) << "u " << p.u_o << " v " << p.v_o << " G " << G;
    EXPECT_NEAR(norm(got), norm(sphere_embed(p, R)), 1e-10);
  }
}

TEST(RotateToGoalFrame, QuarterTurnOnMeridian) {
  const SpherePoint q = rotate_to_goal_frame({0.0, 0.3}, kPi / 4 + kPi / 2);
  EXPECT_NEAR(q.v_o, 0.0, 1e-12);
  EXPECT_NEAR(q.u_o, 0.3, 1e-12);
  const Vec3 want = rp_test::rotate_about_vertical(sphere_embed({0.0, 0.3}, 1.0), kPi / 2);
  const Vec3 got = sphere_embed(q, 1.0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
}

TEST(ZxZyAngles, Examples) {
  QAngles q = zx_zy_angles({0.5, 0.0});
  EXPECT_DOUBLE_EQ(q.zx, 0.5);
  EXPECT_DOUBLE_EQ(q.zy, kPi / 2);
  q = zx_zy_angles({0.0, 0.7});
  EXPECT_DOUBLE_EQ(q.zx, 0.0);
  EXPECT_DOUBLE_EQ(q.zy, 0.0);
  q = zx_zy_angles({0.4, 0.4});
  EXPECT_DOUBLE_EQ(q.zx, 0.4);
  EXPECT_DOUBLE_EQ(q.zy, std::atan2(std::sin(0.4) * std::cos(0.4), std::sin(0.4)));
}

TEST(ZxZyAngles, QuotientFormAgreesInFirstQuadrant) {
  Rng r;
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(1e-3, kPi / 2), v = r.uniform(1e-3, kPi / 2);
    const double quotient = std::atan(std::sin(u) * std::cos(v) / std::sin(v));
    EXPECT_NEAR(zx_zy_angles({u, v}).zy, quotient, 1e-12);
  }
}

TEST(ChordError, Examples) {
  EXPECT_EQ(chord_error({0.4, -0.2}, {0.4, -0.2}, 0.5), 0.0);
  EXPECT_NEAR(chord_error({0.0, 0.0}, {kPi, 0.0}, 0.5), 1.0, 1e-15);
}

TEST(ChordError, MatchesEmbeddingDistance) {
  Rng r;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint a{r.uniform(-kPi, kPi), r.uniform(-kPi, kPi)};
    const SpherePoint b{r.uniform(-kPi, kPi), r.uniform(-kPi, kPi)};
    const Vec3 ea = sphere_embed(a, 0.5), eb = sphere_embed(b, 0.5);
    const double want = norm({ea[0] - eb[0], ea[1] - eb[1], ea[2] - eb[2]});
    EXPECT_NEAR(chord_error(a, b, 0.5), want, 1e-12);
  }
}

TEST(Angles, WrapIntoRange) {
  Rng r;
  for (int i = 0; i < 1000; ++i) {
    const double a = r.uniform(-50.0, 50.0);
    const double w = wrap_angle(a);
    EXPECT_LE(std::abs(w), kPi);
    EXPECT_NEAR(std::remainder(a - w, 2.0 * kPi), 0.0, 1e-12);
  }
}

TEST(Angles, ClampBand) {
  EXPECT_DOUBLE_EQ(safe_asin(1.0 + 5e-10), kPi / 2);
  EXPECT_THROW(safe_asin(1.0 + 1e-6), DomainError);
  EXPECT_DOUBLE_EQ(safe_acos(-1.0 - 5e-10), kPi);
  EXPECT_EQ(safe_sqrt(-5e-10), 0.0);
  EXPECT_THROW(safe_sqrt(-1e-6), NumericalDomain);
}
