#pragma once

#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/dynamics.hpp"
#include "tailsitter/vehicle.hpp"

namespace tailsitter {

using Vec2 = Eigen::Vector2d;

struct Gains {
  Vec2 kp{11.6, 17.4};  // position proportional (y, z), 1/s^2
  Vec2 kd{6.82, 6.82};  // position derivative (y, z), 1/s
  double k_r = 74.73;   // attitude proportional, 1/s^2
  double k_omega = 17.29;  // attitude derivative, 1/s

  // kp = omega_n^2, kd = 2 zeta omega_n on every axis.
  static Gains from_damping(double zeta, const Vec2& omega_n, double zeta_att, double omega_n_att);

  void validate() const;
};

struct TrajectoryPoint {
  double t = 0.0;
  Vec2 r = Vec2::Zero();
  Vec2 r_dot = Vec2::Zero();
  Vec2 r_ddot = Vec2::Zero();
  // Pitch the trajectory was designed around, when it has one.
  std::optional<double> theta_ref;
};

struct ControllerOutput {
  double u1 = 0.0;  // collective, N
  double u2 = 0.0;  // pitch moment, N m
  ControlInput command;  // unclamped per-set thrusts
  Vec2 f_des = Vec2::Zero();
  Vec2 b2_des = Vec2::Zero();
  double theta_des = 0.0;
  double e_theta = 0.0;
  Vec2 e_pos = Vec2::Zero();
  bool degenerate_force = false;
};

class DegenerateForce : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DesiredAttitude {
  Vec2 b2_des;
  double theta_des;
};

Vec2 desired_accel(const State& state, const TrajectoryPoint& ref, const Gains& gains);

// `forces` and `alpha_e` are the aerodynamics at the current measured state.
Vec2 desired_force(const Vec2& r_ddot_des, const State& state, const VehicleParams& params, const AeroForces& forces,
                   double alpha_e);

double collective_thrust(const Vec2& f_des, double theta);

// Throws DegenerateForce when |f_des| <= 1e-9.
DesiredAttitude desired_attitude(const Vec2& f_des);

// Signed pitch error theta - theta_des wrapped to (-pi, pi], measured between
// the unit vectors so that it is continuous through the +-pi seam.
double attitude_error(double theta, double theta_des);

double attitude_moment(const State& state, double theta_des, double m_air, const Gains& gains,
                       const VehicleParams& params);

ControlInput distribute_thrust(double u1, double u2, const VehicleParams& params);

// Cascaded position -> attitude -> thrust-distribution controller. Keeps the
// last desired pitch (fallback for a vanishing desired force) and the last
// applied thrusts (needed for the wake model when eta > 0).
class GeometricController {
 public:
  GeometricController(const VehicleParams& params, const Gains& gains, const AeroSpline& spline);

  ControllerOutput compute(const State& state, const TrajectoryPoint& ref);

  void reset(double theta_des, const ControlInput& applied);
  const ControlInput& last_applied() const { return last_applied_; }

 private:
  VehicleParams params_;
  Gains gains_;
  const AeroSpline* spline_;
  double last_theta_des_ = 0.0;
  bool have_theta_des_ = false;
  ControlInput last_applied_;
};

}  // namespace tailsitter
