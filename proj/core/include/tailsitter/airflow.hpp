#pragma once

#include <stdexcept>

#include "tailsitter/vehicle.hpp"

namespace tailsitter {

// Airflow over the virtual aerodynamic centre.
struct AirflowState {
  double v_i = 0.0;      // inertial speed, m/s
  double gamma = 0.0;    // flight-path angle, rad
  double alpha = 0.0;    // nominal AoA theta - gamma, rad in (-pi, pi]
  double v_w = 0.0;      // wake speed, m/s
  double v_a = 0.0;      // true airspeed, m/s
  double alpha_e = 0.0;  // effective AoA, rad
};

struct InertialSpeed {
  double v_i;
  double gamma;
};

class NegativeThrust : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Speeds below this are treated as zero (gamma and alpha_e conventions).
inline constexpr double kSpeedEpsilon = 1e-9;

InertialSpeed inertial_speed(double y_dot, double z_dot);

// Momentum-theory wake speed behind one propeller producing `thrust_per_prop`.
double wake_speed(double v_i, double alpha, double thrust_per_prop, const VehicleParams& params);

double true_airspeed(double v_i, double v_w, double alpha);

// arcsin form, valid for forward flow over the chord (|alpha_e| <= pi/2).
double effective_aoa(double v_i, double v_a, double alpha);

// Angle between b2 and the true airflow, continuous over the full circle.
// Coincides with effective_aoa() whenever v_i cos(alpha) + v_w >= 0.
double effective_aoa_full(double v_i, double v_w, double alpha);

// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

// Both wings evaluated with their own set thrust (split over two propellers)
// and averaged into a single aerodynamic centre.
AirflowState compute_airflow(double theta, double y_dot, double z_dot, double t_top, double t_bottom,
                             const VehicleParams& params);

}  // namespace tailsitter
