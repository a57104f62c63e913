#include "tailsitter/airflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tailsitter {

InertialSpeed inertial_speed(double y_dot, double z_dot) {
  const double v_i = std::hypot(y_dot, z_dot);
  if (v_i < kSpeedEpsilon) return {v_i, 0.0};
  return {v_i, std::atan2(z_dot, y_dot)};
}

double wake_speed(double v_i, double alpha, double thrust_per_prop, const VehicleParams& params) {
  if (thrust_per_prop < 0.0) throw NegativeThrust("wake_speed: thrust must be non-negative");
  if (params.eta == 0.0) return 0.0;
  const double axial = v_i * std::cos(alpha);
  const double disk = 0.5 * params.rho * std::numbers::pi * params.r_prop * params.r_prop;
  return params.eta * std::sqrt(axial * axial + thrust_per_prop / disk);
}

double true_airspeed(double v_i, double v_w, double alpha) {
  const double radicand = v_w * v_w + v_i * v_i + 2.0 * v_i * v_w * std::cos(alpha);
  return std::sqrt(std::max(radicand, 0.0));
}

double effective_aoa(double v_i, double v_a, double alpha) {
  if (v_a < kSpeedEpsilon) return 0.0;
  return std::asin(std::clamp(v_i * std::sin(alpha) / v_a, -1.0, 1.0));
}

double effective_aoa_full(double v_i, double v_w, double alpha) {
  const double normal = v_i * std::sin(alpha);
  const double chordwise = v_i * std::cos(alpha) + v_w;
  if (std::hypot(normal, chordwise) < kSpeedEpsilon) return 0.0;
  if (v_w == 0.0) return alpha;
  return std::atan2(normal, chordwise);
}

double wrap_pi(double angle) {
  if (angle > -std::numbers::pi && angle <= std::numbers::pi) return angle;
  double a = std::fmod(angle + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

AirflowState compute_airflow(double theta, double y_dot, double z_dot, double t_top, double t_bottom,
                             const VehicleParams& params) {
  AirflowState s;
  const auto [v_i, gamma] = inertial_speed(y_dot, z_dot);
  s.v_i = v_i;
  s.gamma = gamma;
  s.alpha = wrap_pi(theta - gamma);

  if (params.eta == 0.0) {
    s.v_w = 0.0;
    s.v_a = v_i;
    s.alpha_e = s.alpha;
    return s;
  }

  double v_w = 0.0, v_a = 0.0, alpha_e = 0.0;
  for (double set_thrust : {t_top, t_bottom}) {
    const double w = wake_speed(v_i, s.alpha, std::max(set_thrust, 0.0) / 2.0, params);
    v_w += w;
    v_a += true_airspeed(v_i, w, s.alpha);
    alpha_e += effective_aoa_full(v_i, w, s.alpha);
  }
  s.v_w = v_w / 2.0;
  s.v_a = v_a / 2.0;
  s.alpha_e = alpha_e / 2.0;
  return s;
}

}  // namespace tailsitter
