#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "tailsitter/controller.hpp"

using namespace tailsitter;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
const VehicleParams kParams{};
const Gains kGains{};
}  // namespace

TEST(DesiredAccel, Feedforward) {
  TrajectoryPoint ref;
  ref.r = Vec2(3, 4);
  ref.r_dot = Vec2(1, 0);
  ref.r_ddot = Vec2(0.5, -0.2);
  const State s{3, 4, 0, 1, 0, 0};
  EXPECT_TRUE(desired_accel(s, ref, kGains).isApprox(ref.r_ddot));
}

TEST(DesiredAccel, Gains) {
  TrajectoryPoint ref;
  ref.r_ddot = Vec2(0.5, -0.2);
  State s{1, 0, 0, 0, 0, 0};
  EXPECT_TRUE(desired_accel(s, ref, kGains).isApprox(ref.r_ddot - Vec2(11.6, 0)));
  s = {0, 0, 0, 0, 1, 0};
  EXPECT_TRUE(desired_accel(s, ref, kGains).isApprox(ref.r_ddot - Vec2(0, 6.82)));
}

TEST(DesiredForce, Hover) {
  const State s{0, 0, kHalfPi, 0, 0, 0};
  const Vec2 f = desired_force(Vec2::Zero(), s, kParams, {}, 0.0);
  EXPECT_NEAR(f.x(), 0.0, 1e-12);
  EXPECT_NEAR(f.y(), 8.4876, 1e-4);
  const Vec2 g = desired_force(Vec2(1, 0), s, kParams, {}, 0.0);
  EXPECT_NEAR(g.x(), 0.8652, 1e-12);
  EXPECT_NEAR(g.y(), 8.4876, 1e-4);
}

TEST(DesiredForce, LevelCruise) {
  const State s{0, 0, 0.05, 20, 0, 0};
  AeroForces aero;
  aero.lift = kParams.m * kParams.g;
  aero.drag = 0.7;
  const Vec2 f = desired_force(Vec2::Zero(), s, kParams, aero, 0.05);
  EXPECT_NEAR(f.x(), 0.7, 1e-12);
  EXPECT_NEAR(f.y(), 0.0, 1e-12);
}

TEST(CollectiveThrust, Projection) {
  EXPECT_NEAR(collective_thrust(Vec2(0, 8.4876), kHalfPi), 8.4876, 1e-12);
  EXPECT_NEAR(collective_thrust(Vec2(0, 8.4876), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(collective_thrust(Vec2(1, 1), std::numbers::pi / 4), std::sqrt(2.0), 1e-12);
}

TEST(DesiredAttitude, Directions) {
  auto a = desired_attitude(Vec2(0, 8.4876));
  EXPECT_TRUE(a.b2_des.isApprox(Vec2(0, 1)));
  EXPECT_NEAR(a.theta_des, kHalfPi, 1e-12);
  EXPECT_NEAR(desired_attitude(Vec2(1, 0)).theta_des, 0.0, 1e-12);
  EXPECT_NEAR(desired_attitude(Vec2(1, 1)).theta_des, std::numbers::pi / 4, 1e-12);
  EXPECT_THROW(desired_attitude(Vec2(1e-12, 0)), DegenerateForce);
}

TEST(AttitudeError, WrapsThroughSeam) {
  EXPECT_NEAR(attitude_error(0.3, 0.1), 0.2, 1e-12);
  EXPECT_NEAR(attitude_error(std::numbers::pi - 0.05, -std::numbers::pi + 0.05), -0.1, 1e-12);
  EXPECT_NEAR(attitude_error(0.1 + 4 * std::numbers::pi, 0.0), 0.1, 1e-12);
}

TEST(AttitudeMoment, Cases) {
  const State s{0, 0, 1.0, 0, 0, 0};
  EXPECT_EQ(attitude_moment(s, 1.0, 0.0, kGains, kParams), 0.0);
  const double u2 = attitude_moment(s, 0.9, 0.0, kGains, kParams);
  EXPECT_NEAR(u2, -9.77e-3 * 74.73 * 0.1, 1e-12);
  EXPECT_NEAR(u2, -0.0730, 1e-4);
  EXPECT_NEAR(attitude_moment(s, 1.0, 0.5, kGains, kParams), -0.5, 1e-12);
}

TEST(DistributeThrust, Cases) {
  auto c = distribute_thrust(10, 0, kParams);
  EXPECT_EQ(c.t_top, 5.0);
  EXPECT_EQ(c.t_bottom, 5.0);
  c = distribute_thrust(8, 0.488, kParams);
  EXPECT_NEAR(c.t_top, 3.0, 1e-12);
  EXPECT_NEAR(c.t_bottom, 5.0, 1e-12);
}

TEST(DistributeThrust, RoundTrip) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> t(0.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double tt = t(rng), tb = t(rng);
    const auto c = distribute_thrust(tt + tb, kParams.l * (tb - tt), kParams);
    EXPECT_NEAR(c.t_top, tt, 1e-12);
    EXPECT_NEAR(c.t_bottom, tb, 1e-12);
  }
}

TEST(Gains, CriticalDampingRelations) {
  // kd = 2 sqrt(kp) is critical damping for a double integrator.
  const Gains g;
  EXPECT_NEAR(g.kd.x() / (2 * std::sqrt(g.kp.x())), 1.0, 2e-3);
  EXPECT_NEAR(g.k_omega / (2 * std::sqrt(g.k_r)), 1.0, 2e-3);
  const auto d = Gains::from_damping(1.0, Vec2(2, 3), 0.5, 4);
  EXPECT_TRUE(d.kp.isApprox(Vec2(4, 9)));
  EXPECT_TRUE(d.kd.isApprox(Vec2(4, 6)));
  EXPECT_DOUBLE_EQ(d.k_r, 16);
  EXPECT_DOUBLE_EQ(d.k_omega, 4);
  Gains bad;
  bad.k_r = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(GeometricController, HoverAtRestCommandsWeight) {
  GeometricController c(kParams, kGains, testing_support::naca());
  const auto out = c.compute(State{0, 0, kHalfPi, 0, 0, 0}, TrajectoryPoint{});
  EXPECT_NEAR(out.u1, kParams.m * kParams.g, 1e-12);
  EXPECT_NEAR(out.u2, 0.0, 1e-12);
  EXPECT_NEAR(out.command.t_top, out.command.t_bottom, 1e-12);
  EXPECT_NEAR(out.theta_des, kHalfPi, 1e-12);
}

TEST(GeometricController, DegenerateForceKeepsLastPitch) {
  GeometricController c(kParams, kGains, testing_support::naca());
  c.reset(1.2, {});
  // Feedforward of -g at rest makes the desired force vanish.
  TrajectoryPoint ref;
  ref.r_ddot = Vec2(0, -kParams.g);
  const auto out = c.compute(State{0, 0, 1.0, 0, 0, 0}, ref);
  EXPECT_TRUE(out.degenerate_force);
  EXPECT_NEAR(out.theta_des, 1.2, 1e-12);
}
