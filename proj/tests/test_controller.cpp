#include <cstring>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace rollplan;
using rp_test::Rng;

TEST(IncircleRadius, DegenerateTriangle) { EXPECT_EQ(incircle_radius(0.0, 0.5, 4.0), 0.0); }

TEST(IncircleRadius, MatchesAreaOverSemiperimeter) {
  EXPECT_NEAR(incircle_radius(kPi / 4, 1.0, 4.0), rp_test::incircle_oracle(kPi / 4, 1.0), 1e-12);
  Rng r;
  for (int i = 0; i < 500; ++i) {
    const double u = r.uniform(0.0, kPi / 2 - 1e-3);
    EXPECT_NEAR(incircle_radius(u, 0.5, 4.0), rp_test::incircle_oracle(u, 0.5), 1e-11);
    EXPECT_EQ(incircle_radius(-u, 0.5, 4.0), incircle_radius(u, 0.5, 4.0));
  }
}

TEST(IncircleRadius, UpperBranchOffset) {
  const double u = kPi / 2 + 0.1;
  const double r_i = 0.5 / std::cos(u), l_i = 2.0 * 0.5 * std::tan(u), S = (2.0 * r_i + l_i) / 2.0;
  const double radical = std::sqrt((S - r_i) * (S - r_i) * (S - l_i) / S);
  EXPECT_NEAR(incircle_radius(u, 0.5, 4.0), 0.125 + radical, 1e-12);
}

TEST(IncircleRadius, ClampedAtRightAngle) {
  const double at = incircle_radius(kPi / 2, 0.5, 4.0);
  EXPECT_TRUE(std::isfinite(at));
  EXPECT_NEAR(at, incircle_radius(kPi / 2 - kIncircleClamp, 0.5, 4.0), 0.0);
}

TEST(ProjectionAngle, Examples) {
  EXPECT_NEAR(projection_angle(0.8, 0.0, 0.5, 0.5), 0.8, 1e-15);
  EXPECT_EQ(projection_angle(0.3, -0.3, 0.5, 0.2), 0.0);
  EXPECT_NEAR(projection_angle(0.8, 0.1, 0.5, 1.0), std::atan(0.5 * std::tan(0.9)), 1e-15);
  EXPECT_THROW(projection_angle(kPi / 2, 0.0, 0.5, 1.0), PoleError);
  EXPECT_THROW(projection_angle(0.3, 0.0, 0.5, 0.0), PoleError);
}

TEST(ProjectionAngle, MonotoneInZetaPrime) {
  double prev = -kPi;
  for (int i = 0; i <= 200; ++i) {
    const double zp = -1.5 + 2.2 * i / 200.0;
    const double z = projection_angle(0.8, zp, 0.5, 1.0);
    EXPECT_GT(z, prev);
    prev = z;
  }
}

namespace {

VirtualSurfaceState surface(double R_n, double R_t, double zeta, double v_prime) {
  VirtualSurfaceState vs;
  vs.R_n = R_n;
  vs.R_g = R_t - R_n;
  vs.R_t = R_t;
  vs.zeta = zeta;
  vs.v_prime = v_prime;
  return vs;
}

} // namespace

TEST(ArcLengthInputs, CancellationGivesZero) {
  const double R = 0.5, vp = 0.3;
  GoalSpec g = rp_test::case_goal();
  const double R_t = R * std::cos(vp);
  const double zeta = std::atan(R_t * std::tan(g.Psi_f.v_o) / R);
  const ControlInputs ci = arc_length_inputs(g, surface(R, R_t, zeta, vp), R);
  EXPECT_NEAR(ci.alpha_s, 0.0, 1e-12);
  EXPECT_NEAR(ci.beta_s, 0.0, 1e-7);
  EXPECT_EQ(ci.gamma_s, 0.0);
}

TEST(ArcLengthInputs, TorsionCollapse) {
  const ControlInputs ci = arc_length_inputs(rp_test::case_goal(), surface(0.3, 0.0, 0.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(ci.beta_s, 2.0);
}

TEST(ArcLengthInputs, PoleAtGoalLatitude) {
  GoalSpec g = rp_test::case_goal();
  g.Psi_f.v_o = kPi / 2;
  EXPECT_THROW(arc_length_inputs(g, surface(0.3, 0.6, 0.1, 0.0), 0.5), PoleError);
}

TEST(ControlInputs, DiagonalHeading) {
  GoalSpec g;
  g.P_f = {2.0, 2.0};
  g.Psi_f = {0.4, 0.3};
  const ControlInputs ci = control_inputs({}, g, surface(0.3, 0.6, 0.1, 0.2), 0.5);
  EXPECT_NEAR(ci.theta, 3.0 * kPi / 4, 1e-12);
  EXPECT_EQ(ci.phi, 0.0);
}

TEST(ControlInputs, HeadingUsesAtan2) {
  GoalSpec g = rp_test::case_goal();
  g.P_f = {-3.0, -3.2};
  const ControlInputs ci = control_inputs({}, g, surface(0.3, 0.6, 0.1, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(ci.G_f, std::atan2(-3.2, -3.0));
}

TEST(ControlInputs, CaseStudyHeadingIsComputed) {
  EXPECT_NEAR(rp_test::case_goal().heading(), 0.818, 1e-3);
}

TEST(ControlInputs, SteeringSingularityWhenTorsionVanishes) {
  const double R = 0.5;
  GoalSpec g = rp_test::case_goal();
  g.P_f = {2.0, 2.0};
  const VirtualSurfaceState vs = surface(R, R, 0.0, 0.0);
  EXPECT_EQ(arc_length_inputs(g, vs, R).beta_s, 0.0);
  EXPECT_THROW(control_inputs({}, g, vs, R), SteeringSingularity);
}

TEST(ControlInputs, PhiOffsetHalfPlanes) {
  EXPECT_EQ(steering_offset(0.0), kPi);
  EXPECT_EQ(steering_offset(-2.0), kPi);
  EXPECT_EQ(steering_offset(kPi / 4), 0.0);
  EXPECT_EQ(steering_offset(-3.0 * kPi / 4), 0.0);
  EXPECT_EQ(steering_offset(2.0), 0.0);
}

TEST(ControlInputs, SteeringSumIgnoresSpinDeviation) {
  Rng r;
  const GoalSpec g = rp_test::case_goal();
  const VirtualSurfaceState vs = surface(0.3, 0.6, 0.1, 0.2);
  const ControlInputs base = control_inputs({}, g, vs, 0.5, 0.0);
  for (int i = 0; i < 500; ++i) {
    const double q = r.uniform(-20.0, 20.0);
    const ControlInputs ci = control_inputs({}, g, vs, 0.5, q);
    EXPECT_NEAR(ci.theta + ci.phi, base.theta + base.phi, 1e-12);
  }
}

TEST(ControlInputs, Deterministic) {
  const GoalSpec g = rp_test::case_goal();
  const Configuration x{0.4, 0.2, 0.3, 0.1, 0.7};
  const TuningState t = rp_test::reference_tuning();
  const VirtualSurfaceState vs = virtual_surface(x, g, t, 0.5, 4.0);
  const ControlInputs a = control_inputs(x, g, vs, 0.5, 0.4), b = control_inputs(x, g, vs, 0.5, 0.4);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(VirtualSurface, RadiusRule) {
  Rng r;
  const GoalSpec g = rp_test::case_goal();
  for (int i = 0; i < 200; ++i) {
    const Configuration x{0.0, 0.0, r.uniform(-kPi, kPi), r.uniform(-1.2, 1.2), 0.0};
    TuningState t;
    t.R_q = r.uniform(0.001, 0.1);
    t.zeta_q = r.uniform(-0.5, 0.5);
    const VirtualSurfaceState vs = virtual_surface(x, g, t, 0.5, 4.0);
    EXPECT_EQ(vs.R_t, vs.R_n + vs.R_g);
    EXPECT_EQ(vs.R_n, vs.R_g);
    EXPECT_DOUBLE_EQ(vs.R_n, (vs.R_i + vs.R_a) / 2.0);
    const ControlInputs ci = arc_length_inputs(g, vs, 0.5);
    EXPECT_GE(ci.beta_s, 0.0);
  }
}

TEST(VirtualSurface, ShiftAddsQuarterTurn) {
  const GoalSpec g = rp_test::multispin_goal(-1.7);
  const TuningState t = rp_test::reference_tuning();
  const VirtualSurfaceState vs = virtual_surface({}, g, t, 0.5, 4.0, true);
  EXPECT_DOUBLE_EQ(vs.zeta, projection_angle(0.7 + kPi / 2, t.zeta_prime(), 0.5, vs.R_t));
}

TEST(SpinDeviation, Examples) {
  SpinTracker tr;
  tr.S_t = 0.25 * 1.3;
  EXPECT_NEAR(spin_deviation(1.3, 0.0, tr, 0.5), 0.0, 1e-15);
  tr.S_t = 0.25;
  EXPECT_DOUBLE_EQ(spin_deviation(0.0, 0.0, tr, 0.5), 1.0);
}

TEST(SpinDeviation, SignFlipsOnceAlongRamp) {
  const SpinTracker tr = SpinTracker::make(rp_test::case_goal(), 0.5, 0.0);
  ASSERT_GT(spin_deviation(0.0, 0.0, tr, 0.5), 0.0);
  int flips = 0;
  double prev = spin_deviation(0.0, 0.0, tr, 0.5);
  for (int i = 1; i <= 1000; ++i) {
    const double q = spin_deviation(10.0 * i / 1000, 0.0, tr, 0.5);
    flips += (q < 0.0) != (prev < 0.0);
    prev = q;
  }
  EXPECT_EQ(flips, 1);
}

TEST(RollingRate, Examples) {
  GoalSpec g = rp_test::case_goal();
  Configuration at_goal{3.0, 3.2, 0.1, 0.2, 0.0};
  EXPECT_EQ(rolling_rate(at_goal, g, 1.0, 0.8), 0.0);
  EXPECT_EQ(rolling_rate(at_goal, g, 1.0, 0.8, RateDistance::euclidean), 0.0);
  Configuration on_curve{0.0, 0.0, g.Psi_f.u_o, 0.0, 0.0};
  EXPECT_EQ(rolling_rate(on_curve, g, 1.0, 0.8), 0.0);

  GoalSpec unit;
  unit.P_f = {1.0, 0.0};
  unit.Psi_f = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(rolling_rate({}, unit, 1.0, 1.0, RateDistance::euclidean), 1.0);
  EXPECT_DOUBLE_EQ(rolling_rate({}, unit, 1.0, 1.0, RateDistance::projected), 1.0);
  EXPECT_DOUBLE_EQ(rolling_rate({}, unit, -2.0, 1.0), 0.5);
  EXPECT_THROW(rolling_rate({}, unit, 0.0, 1.0), InvalidGoal);
}

TEST(RollingRate, ProjectedVanishesPastGoalAlongHeading) {
  GoalSpec g;
  g.P_f = {1.0, 0.0};
  g.Psi_f = {1.0, 1.0};
  EXPECT_EQ(rolling_rate({1.2, 0.0, 0.0, 0.0, 0.0}, g, 1.0, 1.0), 0.0);
  EXPECT_GT(rolling_rate({1.2, 0.0, 0.0, 0.0, 0.0}, g, 1.0, 1.0, RateDistance::euclidean), 0.0);
}
