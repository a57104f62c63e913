#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/controller.hpp"
#include "tailsitter/vehicle.hpp"

namespace tailsitter {

// Uniformly sampled reference. Queries between samples interpolate linearly;
// queries past the end extrapolate at the final velocity.
class Trajectory {
 public:
  Trajectory(double dt, std::vector<TrajectoryPoint> points);

  double dt() const { return dt_; }
  double duration() const { return points_.empty() ? 0.0 : points_.back().t; }
  const std::vector<TrajectoryPoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  TrajectoryPoint at(double t) const;

  // Steady flight from `start` at constant velocity for `duration` seconds.
  static Trajectory constant_velocity(const Vec2& start, const Vec2& velocity, double duration, double dt);

 private:
  double dt_;
  std::vector<TrajectoryPoint> points_;
};

class TrajectoryError : public std::runtime_error {
 public:
  enum class Kind { InconsistentSign, SingularAoa, NonFinite, InvalidArgument };
  TrajectoryError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Constant horizontal acceleration a_s from v_0 until v_s is reached, then
// `hold` seconds at v_s. Altitude is held at zero.
Trajectory const_accel_trajectory(double a_s, double v_0, double v_s, double hold, double dt);

enum class AoaShape { Linear, Parabola };

struct AoaProfile {
  double alpha_i = 0.0;  // rad
  double alpha_f = 0.0;  // rad
  double t_star = 0.0;   // s
  AoaShape shape = AoaShape::Parabola;
};

double alpha_profile(const AoaProfile& profile, double t);

inline constexpr double kSingularAoa = 0.01;  // rad

// Constant-altitude reference whose speed obeys the body-normal force balance
// with the wing held at alpha_d(t) (no prop-wash). Runs for t_star + hold.
Trajectory prescribed_aoa_trajectory(const AoaProfile& profile, const AeroSpline& spline, const VehicleParams& params,
                                     double dt, double hold);

// Right-hand side of  v' = B(t) - A(t) v^2  at wing angle alpha.
double prescribed_aoa_accel(double alpha, double v, const AeroSpline& spline, const VehicleParams& params);

struct FeasibilityReport {
  std::vector<double> collective;  // quasi-static required collective per point, N
  std::vector<double> pitch;       // quasi-static pitch per point, rad
  std::vector<bool> feasible;      // per point, against [2 t_min, 2 t_max_set]
  bool all_feasible = true;
  std::size_t infeasible_points = 0;
  double max_accel = 0.0;
  double distance = 0.0;
  double duration = 0.0;
  double max_collective = 0.0;
};

// Quasi-static trim estimate (eta = 0) for each reference point.
FeasibilityReport feasibility_report(const Trajectory& traj, const VehicleParams& params, const AeroSpline& spline);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace tailsitter
