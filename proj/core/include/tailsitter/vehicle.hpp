#pragma once

#include <stdexcept>
#include <string>

namespace tailsitter {

// Physical constants of the quadrotor-biplane airframe. Defaults are the
// reference vehicle; thrust limits apply to one *set* (two motors on a wing).
struct VehicleParams {
  double m = 0.8652;         // kg
  double i_xx = 9.77e-3;     // kg m^2, pitch inertia
  double l = 0.244;          // m, rotor-set offset along b3
  double c_bar = 0.087;      // m, wing chord
  double b_span = 1.016;     // m
  double r_prop = 0.229 / 2; // m
  double t_min = 0.0;        // N per set
  double t_max_set = 5.886;  // N per set
  double eta = 0.0;          // prop-wash efficiency in [0, 1]
  double rho = 1.225;        // kg/m^3
  double g = 9.81;           // m/s^2

  double s_wing() const { return c_bar * b_span; }
  double weight() const { return m * g; }
  double thrust_to_weight() const { return 2.0 * t_max_set / weight(); }

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

inline void VehicleParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("VehicleParams: ") + what);
  };
  require(m > 0, "m must be positive");
  require(i_xx > 0, "i_xx must be positive");
  require(l > 0, "l must be positive");
  require(c_bar > 0, "c_bar must be positive");
  require(b_span > 0, "b_span must be positive");
  require(r_prop > 0, "r_prop must be positive");
  require(t_min >= 0 && t_min < t_max_set, "need 0 <= t_min < t_max_set");
  require(eta >= 0 && eta <= 1, "eta must lie in [0, 1]");
  require(rho > 0, "rho must be positive");
  require(g > 0, "g must be positive");
}

}  // namespace tailsitter
