#include "tailsitter/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include <fmt/format.h>

namespace tailsitter {

Trajectory::Trajectory(double dt, std::vector<TrajectoryPoint> points) : dt_(dt), points_(std::move(points)) {
  if (!(dt_ > 0.0)) throw TrajectoryError(TrajectoryError::Kind::InvalidArgument, "trajectory dt must be positive");
}

TrajectoryPoint Trajectory::at(double t) const {
  if (points_.empty()) return TrajectoryPoint{t, Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), std::nullopt};
  const auto& first = points_.front();
  const auto& last = points_.back();
  if (t <= first.t) {
    TrajectoryPoint p = first;
    p.t = t;
    return p;
  }
  if (t >= last.t) {
    TrajectoryPoint p = last;
    p.r = last.r + last.r_dot * (t - last.t);
    p.r_ddot = Vec2::Zero();
    p.t = t;
    return p;
  }
  const double s = (t - first.t) / dt_;
  auto i = static_cast<std::size_t>(std::floor(s));
  i = std::min(i, points_.size() - 2);
  const double w = s - static_cast<double>(i);
  const auto& a = points_[i];
  const auto& b = points_[i + 1];
  // Snap to a sample when within rounding of it; the simulator queries exactly on the grid.
  if (w < 1e-9) {
    TrajectoryPoint p = a;
    p.t = t;
    return p;
  }
  if (w > 1.0 - 1e-9) {
    TrajectoryPoint p = b;
    p.t = t;
    return p;
  }
  TrajectoryPoint p;
  p.t = t;
  p.r = (1 - w) * a.r + w * b.r;
  p.r_dot = (1 - w) * a.r_dot + w * b.r_dot;
  p.r_ddot = (1 - w) * a.r_ddot + w * b.r_ddot;
  if (a.theta_ref && b.theta_ref) p.theta_ref = (1 - w) * *a.theta_ref + w * *b.theta_ref;
  return p;
}

Trajectory Trajectory::constant_velocity(const Vec2& start, const Vec2& velocity, double duration, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  std::vector<TrajectoryPoint> pts;
  pts.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    pts.push_back({t, start + velocity * t, velocity, Vec2::Zero(), std::nullopt});
  }
  return {dt, std::move(pts)};
}

Trajectory const_accel_trajectory(double a_s, double v_0, double v_s, double hold, double dt) {
  if (!(dt > 0.0)) throw TrajectoryError(TrajectoryError::Kind::InvalidArgument, "dt must be positive");
  if (!(hold >= 0.0)) throw TrajectoryError(TrajectoryError::Kind::InvalidArgument, "hold must be non-negative");
  if (a_s == 0.0 || !((v_s - v_0) / a_s > 0.0)) {
    throw TrajectoryError(TrajectoryError::Kind::InconsistentSign,
                          fmt::format("a_s = {} cannot take the speed from {} to {}", a_s, v_0, v_s));
  }
  const double t_acc = (v_s - v_0) / a_s;
  const double y_acc = v_0 * t_acc + 0.5 * a_s * t_acc * t_acc;
  const auto n = static_cast<std::size_t>(std::llround((t_acc + hold) / dt));
  std::vector<TrajectoryPoint> pts;
  pts.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    TrajectoryPoint p;
    p.t = t;
    if (t < t_acc) {
      p.r = Vec2(v_0 * t + 0.5 * a_s * t * t, 0.0);
      p.r_dot = Vec2(v_0 + a_s * t, 0.0);
      p.r_ddot = Vec2(a_s, 0.0);
    } else {
      p.r = Vec2(y_acc + v_s * (t - t_acc), 0.0);
      p.r_dot = Vec2(v_s, 0.0);
      p.r_ddot = Vec2::Zero();
    }
    pts.push_back(p);
  }
  return {dt, std::move(pts)};
}

double alpha_profile(const AoaProfile& profile, double t) {
  if (t >= profile.t_star) return profile.alpha_f;
  if (t <= 0.0) return profile.alpha_i;
  switch (profile.shape) {
    case AoaShape::Linear:
      return profile.alpha_i - (profile.alpha_i - profile.alpha_f) / profile.t_star * t;
    case AoaShape::Parabola: {
      const double s = t - profile.t_star;
      return profile.alpha_f - (profile.alpha_f - profile.alpha_i) / (profile.t_star * profile.t_star) * s * s;
    }
  }
  return profile.alpha_f;
}

double prescribed_aoa_accel(double alpha, double v, const AeroSpline& spline, const VehicleParams& params) {
  const auto c = spline.at(alpha);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double a_coef = 0.5 * params.rho * params.s_wing() * (c.c_l * ca + c.c_d * sa) / (params.m * sa);
  const double b_coef = params.g * ca / sa;
  return b_coef - a_coef * v * v;
}

Trajectory prescribed_aoa_trajectory(const AoaProfile& profile, const AeroSpline& spline, const VehicleParams& params,
                                     double dt, double hold) {
  using Kind = TrajectoryError::Kind;
  if (!(dt > 0.0) || !(profile.t_star > 0.0) || !(hold >= 0.0)) {
    throw TrajectoryError(Kind::InvalidArgument, "prescribed_aoa_trajectory: need dt > 0, t_star > 0, hold >= 0");
  }
  // Both shapes are monotone between the endpoints, so the endpoints bound alpha_d.
  if (std::min(profile.alpha_i, profile.alpha_f) <= kSingularAoa) {
    throw TrajectoryError(Kind::SingularAoa, fmt::format("prescribed AoA must stay above {} rad", kSingularAoa));
  }
  auto rhs = [&](double t, double v) { return prescribed_aoa_accel(alpha_profile(profile, t), v, spline, params); };

  const auto n = static_cast<std::size_t>(std::llround((profile.t_star + hold) / dt));
  std::vector<TrajectoryPoint> pts;
  pts.reserve(n + 1);
  double y = 0.0, v = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double acc = rhs(t, v);
    if (!std::isfinite(v) || !std::isfinite(acc)) {
      throw TrajectoryError(Kind::NonFinite, fmt::format("prescribed AoA speed diverged at t = {}", t));
    }
    pts.push_back({t, Vec2(y, 0.0), Vec2(v, 0.0), Vec2(acc, 0.0), alpha_profile(profile, t)});
    if (k == n) break;
    const double k1 = acc;
    const double k2 = rhs(t + dt / 2, v + dt / 2 * k1);
    const double k3 = rhs(t + dt / 2, v + dt / 2 * k2);
    const double k4 = rhs(t + dt, v + dt * k3);
    const double v_next = v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    y += dt * (v + v_next) / 2;
    v = v_next;
  }
  return {dt, std::move(pts)};
}

namespace {

struct QuasiStatic {
  double normal;      // force residual along b3, N
  double collective;  // force required along b2, N
};

QuasiStatic quasi_static(double theta, const TrajectoryPoint& p, const VehicleParams& params,
                         const AeroSpline& spline) {
  auto no_wake = params;
  no_wake.eta = 0.0;
  const auto flow = compute_airflow(theta, p.r_dot.x(), p.r_dot.y(), 0.0, 0.0, no_wake);
  const auto forces = aero_forces(spline.at(flow.alpha_e), flow.v_a, no_wake);
  State s;
  s.theta = theta;
  const Vec2 required = desired_force(p.r_ddot, s, no_wake, forces, flow.alpha_e);
  const Vec2 b2(std::cos(theta), std::sin(theta));
  const Vec2 b3(-std::sin(theta), std::cos(theta));
  return {b3.dot(required), b2.dot(required)};
}

// Root of the b3 balance with non-negative collective, searched outward from `guess`.
std::optional<double> quasi_static_pitch(double guess, const TrajectoryPoint& p, const VehicleParams& params,
                                         const AeroSpline& spline) {
  constexpr double kStep = 0.25 * std::numbers::pi / 180.0;
  auto f = [&](double th) { return quasi_static(th, p, params, spline); };
  const auto at_guess = f(guess);
  if (at_guess.normal == 0.0 && at_guess.collective >= 0.0) return guess;

  auto bisect = [&](double lo, double hi) {
    double f_lo = f(lo).normal;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = f(mid).normal;
      if ((f_mid < 0) == (f_lo < 0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  double prev_up = guess, prev_dn = guess;
  double f_up = at_guess.normal, f_dn = at_guess.normal;
  for (int k = 1; k * kStep <= std::numbers::pi; ++k) {
    for (int dir : {-1, 1}) {
      double& prev = dir < 0 ? prev_dn : prev_up;
      double& f_prev = dir < 0 ? f_dn : f_up;
      const double th = guess + dir * k * kStep;
      const double f_th = f(th).normal;
      if ((f_th < 0) != (f_prev < 0) || f_th == 0.0) {
        const double root = f_th == 0.0 ? th : bisect(prev, th);
        if (f(root).collective >= 0.0) return root;
      }
      prev = th;
      f_prev = f_th;
    }
  }
  return std::nullopt;
}

}  // namespace

FeasibilityReport feasibility_report(const Trajectory& traj, const VehicleParams& params, const AeroSpline& spline) {
  FeasibilityReport rep;
  const auto& pts = traj.points();
  rep.duration = traj.duration();
  if (pts.empty()) return rep;
  rep.distance = (pts.back().r - pts.front().r).norm();

  double guess = std::numbers::pi / 2;
  for (const auto& p : pts) {
    rep.max_accel = std::max(rep.max_accel, p.r_ddot.norm());
    const auto pitch = quasi_static_pitch(guess, p, params, spline);
    double collective = std::numeric_limits<double>::infinity();
    if (pitch) {
      guess = *pitch;
      collective = quasi_static(*pitch, p, params, spline).collective;
    }
    const bool ok = pitch && collective >= 2 * params.t_min && collective <= 2 * params.t_max_set;
    rep.pitch.push_back(pitch.value_or(std::numeric_limits<double>::quiet_NaN()));
    rep.collective.push_back(collective);
    rep.feasible.push_back(ok);
    if (!ok) ++rep.infeasible_points;
    if (std::isfinite(collective)) rep.max_collective = std::max(rep.max_collective, collective);
  }
  rep.all_feasible = rep.infeasible_points == 0;
  return rep;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,y,z,ydot,zdot,yddot,zddot\n";
  for (const auto& p : traj.points()) {
    out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", p.t, p.r.x(), p.r.y(), p.r_dot.x(),
                       p.r_dot.y(), p.r_ddot.x(), p.r_ddot.y());
  }
}

}  // namespace tailsitter
