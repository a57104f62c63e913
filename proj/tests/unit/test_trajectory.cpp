#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "support.hpp"
#include "tailsitter/analysis.hpp"
#include "tailsitter/trajectory.hpp"

using namespace tailsitter;
using testing_support::kDeg;

TEST(ConstAccel, Kinematics) {
  const auto t = const_accel_trajectory(2, 0, 25, 4, 0.01);
  const auto p = t.at(5.0);
  EXPECT_NEAR(p.r_dot.x(), 10.0, 1e-12);
  EXPECT_NEAR(p.r.x(), 25.0, 1e-12);
  EXPECT_NEAR(t.duration(), 16.5, 1e-9);
  EXPECT_NEAR(t.at(12.49).r_ddot.x(), 2.0, 1e-12);
  EXPECT_NEAR(t.at(12.51).r_ddot.x(), 0.0, 1e-12);
  EXPECT_NEAR(t.at(12.5).r.x(), 156.25, 1e-9);
}

TEST(ConstAccel, ReverseMirrors) {
  const auto fwd = const_accel_trajectory(2, 0, 25, 0, 0.01);
  const auto rev = const_accel_trajectory(-2, 25, 0, 0, 0.01);
  EXPECT_NEAR(rev.duration(), 12.5, 1e-9);
  for (double t : {0.0, 3.0, 7.7, 12.5}) {
    EXPECT_NEAR(rev.at(t).r_dot.x(), fwd.at(12.5 - t).r_dot.x(), 1e-9) << t;
    EXPECT_NEAR(rev.at(t).r.x(), 156.25 - fwd.at(12.5 - t).r.x(), 1e-9) << t;
  }
  EXPECT_THROW(const_accel_trajectory(2, 25, 0, 0, 0.01), TrajectoryError);
}

TEST(AlphaProfile, Boundaries) {
  for (auto shape : {AoaShape::Linear, AoaShape::Parabola}) {
    const AoaProfile p{90 * kDeg, 3.47 * kDeg, 87, shape};
    EXPECT_NEAR(alpha_profile(p, 0), 90 * kDeg, 1e-12);
    EXPECT_NEAR(alpha_profile(p, 87), 3.47 * kDeg, 1e-12);
  }
  const AoaProfile p{90 * kDeg, 3.47 * kDeg, 87, AoaShape::Parabola};
  const double expect = 3.47 - (3.47 - 90) / (87.0 * 87.0) * (43.5 - 87) * (43.5 - 87);
  EXPECT_NEAR(alpha_profile(p, 43.5) / kDeg, expect, 1e-9);
  EXPECT_NEAR(expect, 25.10, 0.01);
}

TEST(PrescribedAoa, HoverPersists) {
  const AoaProfile p{90 * kDeg, 90 * kDeg, 10, AoaShape::Linear};
  const auto t = prescribed_aoa_trajectory(p, testing_support::naca(), VehicleParams{}, 0.01, 0);
  for (const auto& pt : t.points()) EXPECT_NEAR(pt.r_dot.x(), 0.0, 1e-12);
}

TEST(PrescribedAoa, ConstantAngleReachesTrimSpeed) {
  const auto& s = testing_support::naca();
  VehicleParams vp;
  const double a = 45 * kDeg;
  const auto c = s.at(a);
  const double big_a = 0.5 * vp.rho * vp.s_wing() * (c.c_l * std::cos(a) + c.c_d * std::sin(a)) / (vp.m * std::sin(a));
  const double big_b = vp.g / std::tan(a);
  const AoaProfile p{a, a, 60, AoaShape::Linear};
  const auto t = prescribed_aoa_trajectory(p, s, vp, 0.01, 0);
  EXPECT_NEAR(t.points().back().r_dot.x(), std::sqrt(big_b / big_a), 1e-6);
}

TEST(PrescribedAoa, ParabolaEndsAtCruiseTrim) {
  const auto& s = testing_support::naca();
  VehicleParams vp;
  const AoaProfile p{90 * kDeg, 3.47 * kDeg, 87, AoaShape::Parabola};
  const auto t = prescribed_aoa_trajectory(p, s, vp, 0.01, 20);
  // Invert a_v = 0.5 rho S v^2 / (m g) at the final angle.
  const double v_trim = std::sqrt(a_v_of_alpha(3.47 * kDeg, s) * vp.weight() / (0.5 * vp.rho * vp.s_wing()));
  EXPECT_NEAR(t.points().back().r_dot.x(), v_trim, 0.01 * v_trim);
  const auto rep = feasibility_report(t, vp, s);
  EXPECT_GT(rep.duration, 100.0);
  EXPECT_GT(rep.distance, 1300.0);
}

TEST(PrescribedAoa, SingularGuard) {
  const AoaProfile p{90 * kDeg, 0.005, 10, AoaShape::Linear};
  try {
    prescribed_aoa_trajectory(p, testing_support::naca(), VehicleParams{}, 0.01, 0);
    FAIL();
  } catch (const TrajectoryError& e) {
    EXPECT_EQ(e.kind(), TrajectoryError::Kind::SingularAoa);
  }
}

TEST(Feasibility, Hover) {
  VehicleParams vp;
  const auto t = Trajectory::constant_velocity(Vec2::Zero(), Vec2::Zero(), 2.0, 0.01);
  const auto rep = feasibility_report(t, vp, testing_support::naca());
  EXPECT_TRUE(rep.all_feasible);
  for (double c : rep.collective) EXPECT_NEAR(c, 8.4876, 1e-4);
  for (double th : rep.pitch) EXPECT_NEAR(th, 90 * kDeg, 1e-9);
}

TEST(Feasibility, ConstAccelDistance) {
  const auto t = const_accel_trajectory(2, 0, 25, 0, 0.01);
  const auto rep = feasibility_report(t, VehicleParams{}, testing_support::naca());
  EXPECT_NEAR(rep.distance, 156.25, 1e-9);
  EXPECT_NEAR(rep.distance, 150.0, 0.05 * 150.0);
  EXPECT_NEAR(rep.max_accel, 2.0, 1e-12);
}

TEST(Trajectory, InterpolatesAndExtrapolates) {
  const auto t = Trajectory::constant_velocity(Vec2(1, 2), Vec2(3, 0), 1.0, 0.1);
  EXPECT_TRUE(t.at(0.55).r.isApprox(Vec2(1 + 3 * 0.55, 2)));
  EXPECT_TRUE(t.at(2.0).r.isApprox(Vec2(7, 2)));
}

TEST(Trajectory, CsvHeader) {
  std::ostringstream out;
  write_trajectory_csv(out, Trajectory::constant_velocity(Vec2::Zero(), Vec2(1, 0), 0.02, 0.01));
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
