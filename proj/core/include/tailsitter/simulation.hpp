#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/controller.hpp"
#include "tailsitter/dynamics.hpp"
#include "tailsitter/trajectory.hpp"

namespace tailsitter {

// One controller/integrator tick: the state at `t` and the input held over [t, t + dt].
struct StepRecord {
  double t = 0.0;
  State state;
  ControlInput input;    // clamped, applied
  ControlInput command;  // raw controller output
  AirflowState airflow;
  AeroForces forces;
  double u1 = 0.0;
  double u2 = 0.0;
  double theta_des = 0.0;
  double e_y = 0.0;
  double e_z = 0.0;
  double e_theta = 0.0;
  std::optional<double> theta_ref;
  bool saturated_top = false;
  bool saturated_bottom = false;
};

enum class ControlUpdate {
  ZeroOrderHold,  // controller sampled once per step, input held over the step
  EveryStage,     // controller re-evaluated inside each Runge-Kutta stage
};

struct ClosedLoopSetup {
  VehicleParams params;
  Gains gains;
  double dt = 0.01;
  double duration = 0.0;
  State initial;
  // Thrusts assumed applied before t = 0 (only matters for the wake model).
  ControlInput initial_input;
  ControlUpdate update = ControlUpdate::ZeroOrderHold;
};

class SimulationFailure : public std::runtime_error {
 public:
  SimulationFailure(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Trajectory -> controller -> clamp -> RK4, zero-order hold at dt.
// `on_step` sees every record; returns the state after the final step.
State simulate_closed_loop(const ClosedLoopSetup& setup, const Trajectory& reference, const AeroSpline& spline,
                           const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace tailsitter
