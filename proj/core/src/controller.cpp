#include "tailsitter/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "tailsitter/airflow.hpp"

namespace tailsitter {

Gains Gains::from_damping(double zeta, const Vec2& omega_n, double zeta_att, double omega_n_att) {
  Gains g;
  g.kp = omega_n.cwiseProduct(omega_n);
  g.kd = 2.0 * zeta * omega_n;
  g.k_r = omega_n_att * omega_n_att;
  g.k_omega = 2.0 * zeta_att * omega_n_att;
  return g;
}

void Gains::validate() const {
  if (!(kp.minCoeff() > 0 && kd.minCoeff() > 0 && k_r > 0 && k_omega > 0)) {
    throw std::invalid_argument("Gains: all gains must be positive");
  }
}

Vec2 desired_accel(const State& state, const TrajectoryPoint& ref, const Gains& gains) {
  const Vec2 r(state.y, state.z);
  const Vec2 v(state.y_dot, state.z_dot);
  return ref.r_ddot - gains.kd.cwiseProduct(v - ref.r_dot) - gains.kp.cwiseProduct(r - ref.r);
}

Vec2 desired_force(const Vec2& r_ddot_des, const State& state, const VehicleParams& params, const AeroForces& forces,
                   double alpha_e) {
  const double flow_angle = state.theta - alpha_e;
  const double c = std::cos(flow_angle), s = std::sin(flow_angle);
  // Aerodynamic force (-D, L) in the airflow frame, rotated into the inertial frame.
  const Vec2 aero(-c * forces.drag - s * forces.lift, -s * forces.drag + c * forces.lift);
  return params.m * r_ddot_des + Vec2(0.0, params.m * params.g) - aero;
}

double collective_thrust(const Vec2& f_des, double theta) {
  return Vec2(std::cos(theta), std::sin(theta)).dot(f_des);
}

DesiredAttitude desired_attitude(const Vec2& f_des) {
  const double norm = f_des.norm();
  if (!(norm > 1e-9)) throw DegenerateForce("desired_attitude: desired force vanishes");
  const Vec2 b2 = f_des / norm;
  return {b2, std::atan2(b2.y(), b2.x())};
}

double attitude_error(double theta, double theta_des) {
  const Vec2 b2(std::cos(theta), std::sin(theta));
  const Vec2 b2_des(std::cos(theta_des), std::sin(theta_des));
  const double cross = b2_des.x() * b2.y() - b2_des.y() * b2.x();
  return wrap_pi(std::atan2(cross, b2_des.dot(b2)));
}

double attitude_moment(const State& state, double theta_des, double m_air, const Gains& gains,
                       const VehicleParams& params) {
  const double e_theta = attitude_error(state.theta, theta_des);
  return params.i_xx * (-gains.k_r * e_theta - gains.k_omega * state.theta_dot) - m_air;
}

ControlInput distribute_thrust(double u1, double u2, const VehicleParams& params) {
  const double diff = u2 / params.l;
  return {(u1 - diff) / 2.0, (u1 + diff) / 2.0};
}

GeometricController::GeometricController(const VehicleParams& params, const Gains& gains, const AeroSpline& spline)
    : params_(params), gains_(gains), spline_(&spline) {}

void GeometricController::reset(double theta_des, const ControlInput& applied) {
  last_theta_des_ = theta_des;
  have_theta_des_ = true;
  last_applied_ = applied;
}

ControllerOutput GeometricController::compute(const State& state, const TrajectoryPoint& ref) {
  ControllerOutput out;
  const auto flow = compute_airflow(state.theta, state.y_dot, state.z_dot, last_applied_.t_top,
                                    last_applied_.t_bottom, params_);
  const auto forces = aero_forces(spline_->at(flow.alpha_e), flow.v_a, params_);

  const Vec2 acc = desired_accel(state, ref, gains_);
  out.e_pos = Vec2(state.y, state.z) - ref.r;
  out.f_des = desired_force(acc, state, params_, forces, flow.alpha_e);
  out.u1 = collective_thrust(out.f_des, state.theta);

  try {
    const auto att = desired_attitude(out.f_des);
    out.b2_des = att.b2_des;
    out.theta_des = att.theta_des;
  } catch (const DegenerateForce&) {
    out.degenerate_force = true;
    out.theta_des = have_theta_des_ ? last_theta_des_ : state.theta;
    out.b2_des = Vec2(std::cos(out.theta_des), std::sin(out.theta_des));
  }
  // Keep theta_des on the same branch as theta so logs do not jump by 2 pi.
  out.theta_des = state.theta - attitude_error(state.theta, out.theta_des);
  last_theta_des_ = out.theta_des;
  have_theta_des_ = true;

  out.e_theta = attitude_error(state.theta, out.theta_des);
  out.u2 = attitude_moment(state, out.theta_des, forces.pitch_moment, gains_, params_);
  out.command = distribute_thrust(out.u1, out.u2, params_);
  last_applied_ = clamp_input(out.command, params_).input;
  return out;
}

}  // namespace tailsitter
