#include "tailsitter/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace tailsitter {

bool State::finite() const {
  return std::isfinite(y) && std::isfinite(z) && std::isfinite(theta) && std::isfinite(y_dot) &&
         std::isfinite(z_dot) && std::isfinite(theta_dot);
}

DynamicsEvaluation evaluate_dynamics(const State& state, const ControlInput& input, const VehicleParams& params,
                                     const AeroSpline& spline) {
  if (!state.finite()) throw NonFiniteState("equations_of_motion: non-finite state");

  DynamicsEvaluation ev;
  ev.airflow = compute_airflow(state.theta, state.y_dot, state.z_dot, input.t_top, input.t_bottom, params);
  ev.coeffs = spline.at(ev.airflow.alpha_e);
  ev.forces = aero_forces(ev.coeffs, ev.airflow.v_a, params);

  const double u1 = input.collective();
  const double flow_angle = state.theta - ev.airflow.alpha_e;
  const double s_th = std::sin(state.theta), c_th = std::cos(state.theta);
  const double s_fl = std::sin(flow_angle), c_fl = std::cos(flow_angle);
  const auto& f = ev.forces;

  auto& d = ev.derivative;
  d.y_dot = state.y_dot;
  d.z_dot = state.z_dot;
  d.theta_dot = state.theta_dot;
  d.y_ddot = (u1 * c_th - f.lift * s_fl - f.drag * c_fl) / params.m;
  d.z_ddot = (-params.m * params.g + u1 * s_th + f.lift * c_fl - f.drag * s_fl) / params.m;
  d.theta_ddot = (f.pitch_moment + params.l * (input.t_bottom - input.t_top)) / params.i_xx;
  return ev;
}

StateDerivative equations_of_motion(const State& state, const ControlInput& input, const VehicleParams& params,
                                    const AeroSpline& spline) {
  return evaluate_dynamics(state, input, params, spline).derivative;
}

ClampedInput clamp_input(const ControlInput& raw, const VehicleParams& params) {
  ClampedInput out;
  out.input.t_top = std::clamp(raw.t_top, params.t_min, params.t_max_set);
  out.input.t_bottom = std::clamp(raw.t_bottom, params.t_min, params.t_max_set);
  out.saturated_top = out.input.t_top != raw.t_top;
  out.saturated_bottom = out.input.t_bottom != raw.t_bottom;
  return out;
}

State advance(const State& s, const StateDerivative& d, double h) {
  return {s.y + h * d.y_dot,         s.z + h * d.z_dot,         s.theta + h * d.theta_dot,
          s.y_dot + h * d.y_ddot,    s.z_dot + h * d.z_ddot,    s.theta_dot + h * d.theta_ddot};
}

State rk4_step(const State& state, const ControlInput& input, double dt, const VehicleParams& params,
               const AeroSpline& spline) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  return rk4_step(state, 0.0, dt,
                  [&](double, const State& s) { return equations_of_motion(s, input, params, spline); });
}

}  // namespace tailsitter
