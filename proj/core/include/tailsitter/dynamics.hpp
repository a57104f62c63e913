#pragma once

#include <stdexcept>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/airflow.hpp"
#include "tailsitter/vehicle.hpp"

namespace tailsitter {

// Planar pose and rates in the inertial y-z plane.
struct State {
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double y_dot = 0.0;
  double z_dot = 0.0;
  double theta_dot = 0.0;

  bool finite() const;
  bool operator==(const State&) const = default;
};

struct StateDerivative {
  double y_dot = 0.0;
  double z_dot = 0.0;
  double theta_dot = 0.0;
  double y_ddot = 0.0;
  double z_ddot = 0.0;
  double theta_ddot = 0.0;
};

// Per-set thrusts: top (T_T) and bottom (T_B) rotor pairs.
struct ControlInput {
  double t_top = 0.0;
  double t_bottom = 0.0;

  double collective() const { return t_top + t_bottom; }
};

struct ClampedInput {
  ControlInput input;
  bool saturated_top = false;
  bool saturated_bottom = false;

  bool saturated() const { return saturated_top || saturated_bottom; }
};

class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything the equations of motion compute along the way; useful for logging.
struct DynamicsEvaluation {
  StateDerivative derivative;
  AirflowState airflow;
  AeroCoefficients coeffs;
  AeroForces forces;
};

DynamicsEvaluation evaluate_dynamics(const State& state, const ControlInput& input, const VehicleParams& params,
                                     const AeroSpline& spline);

StateDerivative equations_of_motion(const State& state, const ControlInput& input, const VehicleParams& params,
                                    const AeroSpline& spline);

ClampedInput clamp_input(const ControlInput& raw, const VehicleParams& params);

State advance(const State& s, const StateDerivative& d, double h);

// Classical fourth-order Runge-Kutta step for any field `f(t, state) -> StateDerivative`.
template <typename Field>
State rk4_step(const State& state, double t, double dt, Field&& f) {
  const StateDerivative k1 = f(t, state);
  const StateDerivative k2 = f(t + dt / 2, advance(state, k1, dt / 2));
  const StateDerivative k3 = f(t + dt / 2, advance(state, k2, dt / 2));
  const StateDerivative k4 = f(t + dt, advance(state, k3, dt));
  State out = state;
  out.y += dt / 6 * (k1.y_dot + 2 * k2.y_dot + 2 * k3.y_dot + k4.y_dot);
  out.z += dt / 6 * (k1.z_dot + 2 * k2.z_dot + 2 * k3.z_dot + k4.z_dot);
  out.theta += dt / 6 * (k1.theta_dot + 2 * k2.theta_dot + 2 * k3.theta_dot + k4.theta_dot);
  out.y_dot += dt / 6 * (k1.y_ddot + 2 * k2.y_ddot + 2 * k3.y_ddot + k4.y_ddot);
  out.z_dot += dt / 6 * (k1.z_ddot + 2 * k2.z_ddot + 2 * k3.z_ddot + k4.z_ddot);
  out.theta_dot += dt / 6 * (k1.theta_ddot + 2 * k2.theta_ddot + 2 * k3.theta_ddot + k4.theta_ddot);
  if (!out.finite()) throw NonFiniteState("rk4_step produced a non-finite state");
  return out;
}

// Vehicle step with the input held constant over [t, t + dt].
State rk4_step(const State& state, const ControlInput& input, double dt, const VehicleParams& params,
               const AeroSpline& spline);

}  // namespace tailsitter
