#include "tailsitter/simulation.hpp"

#include <cmath>

#include <fmt/format.h>

namespace tailsitter {

State simulate_closed_loop(const ClosedLoopSetup& setup, const Trajectory& reference, const AeroSpline& spline,
                           const std::function<void(const StepRecord&)>& on_step) {
  if (!(setup.dt > 0.0)) throw std::invalid_argument("simulate_closed_loop: dt must be positive");
  if (!(setup.duration >= 0.0)) throw std::invalid_argument("simulate_closed_loop: duration must be non-negative");

  GeometricController controller(setup.params, setup.gains, spline);
  controller.reset(setup.initial.theta, clamp_input(setup.initial_input, setup.params).input);

  const auto steps = static_cast<std::size_t>(std::llround(setup.duration / setup.dt));
  State state = setup.initial;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * setup.dt;
    try {
      const TrajectoryPoint ref = reference.at(t);
      const ControllerOutput out = controller.compute(state, ref);
      const ClampedInput clamped = clamp_input(out.command, setup.params);
      if (on_step) {
        const auto ev = evaluate_dynamics(state, clamped.input, setup.params, spline);
        StepRecord rec;
        rec.t = t;
        rec.state = state;
        rec.input = clamped.input;
        rec.command = out.command;
        rec.airflow = ev.airflow;
        rec.forces = ev.forces;
        rec.u1 = out.u1;
        rec.u2 = out.u2;
        rec.theta_des = out.theta_des;
        rec.e_y = out.e_pos.x();
        rec.e_z = out.e_pos.y();
        rec.e_theta = out.e_theta;
        rec.theta_ref = ref.theta_ref;
        rec.saturated_top = clamped.saturated_top;
        rec.saturated_bottom = clamped.saturated_bottom;
        on_step(rec);
      }
      if (setup.update == ControlUpdate::ZeroOrderHold) {
        state = rk4_step(state, clamped.input, setup.dt, setup.params, spline);
      } else {
        // Stage evaluations must not disturb the controller's memory; each
        // starts from the state it had after this step's sample.
        const GeometricController sampled = controller;
        state = rk4_step(state, t, setup.dt, [&](double ts, const State& x) {
          GeometricController stage = sampled;
          const ControllerOutput o = stage.compute(x, reference.at(ts));
          return equations_of_motion(x, clamp_input(o.command, setup.params).input, setup.params, spline);
        });
      }
    } catch (const NonFiniteState& e) {
      throw SimulationFailure(k, fmt::format("step {} (t = {:.2f} s): {}", k, t, e.what()));
    }
  }
  return state;
}

}  // namespace tailsitter
