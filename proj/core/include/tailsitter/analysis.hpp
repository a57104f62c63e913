#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/controller.hpp"
#include "tailsitter/vehicle.hpp"

namespace tailsitter {

struct EquilibriumPoint {
  double alpha = 0.0;  // rad
  double a_v = 0.0;
  double p = 0.0;
  double q = 0.0;
  bool stable = true;
  bool marginal = false;  // p or q is zero; reported stable
};

class SingularDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Dynamic pressure on the wing over weight: 0.5 rho S v_a^2 / (m g).
double aerodynamic_loading(double v_a, const VehicleParams& params);

// Loading at which `alpha` (rad, in (0, pi)) is a steady level-flight equilibrium.
double a_v_of_alpha(double alpha, const AeroSpline& spline);

// Equilibrium angles of attack in (0, 90] deg for a target loading, ascending.
std::vector<double> find_equilibria(double a_v_target, const AeroSpline& spline);

// Precomputes a_v on the search grid so repeated queries (bifurcation scans) are cheap.
class EquilibriumFinder {
 public:
  explicit EquilibriumFinder(const AeroSpline& spline);
  std::vector<double> solve(double a_v_target) const;

  static constexpr double kGridStepDeg = 0.05;
  static constexpr double kRootTolerance = 1e-6;  // rad

 private:
  const AeroSpline* spline_;
  std::vector<double> alpha_;  // rad
  std::vector<double> a_v_;
};

EquilibriumPoint stability_classify(double alpha, const AeroSpline& spline);

using Matrix2 = Eigen::Matrix2d;

// [[-2 C_D, C_D' - C_L], [2 C_L, -C_L' - C_D]]; trace = -p, det = 2 q.
Matrix2 stability_matrix(double alpha, const AeroSpline& spline);

std::array<std::complex<double>, 2> eigenvalues(const Matrix2& m);

// True when every eigenvalue has a non-positive real part.
bool eigen_stable(const Matrix2& m);

// Central-difference Jacobian of the inertial-frame aerodynamic force
// 0.5 rho S |r'| R(alpha) r' with respect to r', at r' = v_ref and fixed pitch.
Matrix2 linearization_oracle(const Vec2& v_ref, double theta, const VehicleParams& params, const AeroSpline& spline);

struct BifurcationSlice {
  double a_v = 0.0;
  std::vector<EquilibriumPoint> equilibria;
};

struct BifurcationDiagram {
  std::vector<BifurcationSlice> slices;
  std::vector<double> folds;
};

BifurcationDiagram bifurcation_scan(double a_v_min, double a_v_max, double step, const AeroSpline& spline);

struct TrimPoint {
  double v_i = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double theta_eq = 0.0;
  double collective_eq = 0.0;
  double differential_eq = 0.0;  // T_B - T_T, N
  double alpha_e_eq = 0.0;
  double a_v_true = 0.0;
  double residual = 0.0;  // |(y'', z'')|, m/s^2
  bool converged = false;
  int iterations = 0;
};

struct TrimOptions {
  double tolerance = 1e-6;  // m/s^2
  int max_iterations = 10000;
  double fd_step = 1e-6;
  double armijo = 1e-4;
  // Warm start; defaults to hover pitch and the matching collective.
  std::optional<double> theta_guess;
  std::optional<double> collective_guess;
};

// Gradient descent on |(y'', z'')|^2 over (theta, collective), with the
// differential thrust chosen each iterate to cancel the aerodynamic moment.
// Starts from the guess (hover pitch by default); falls back to the local
// minima of a coarse pitch scan if that descent stalls.
TrimPoint trim_solve(double v_i, double gamma, double eta, const VehicleParams& params, const AeroSpline& spline,
                     const TrimOptions& options = {});

struct SweepOptions {
  std::vector<double> speeds;  // default 1..30 step 1
  std::vector<double> etas;    // default 0..1 step 0.05
  double settle_time = 5.0;    // s
  double dt = 0.01;
  Gains gains{};
  TrimOptions trim{};
  // Called after each point. Each eta row is swept upward in speed, warm-starting
  // from the previous trim so the solver follows one branch; results are ordered by (v_i, eta).
  std::function<void(std::size_t done, std::size_t total)> progress;

  static SweepOptions defaults();
};

struct SweepPoint {
  TrimPoint trim;          // solver output
  double theta = 0.0;      // after settling, rad
  double alpha_e = 0.0;    // after settling, rad
  double a_v_true = 0.0;   // after settling
  double collective = 0.0;
  double differential = 0.0;
  bool settled_finite = true;
};

// Trim plus a closed-loop settle at constant velocity for every (v_i, eta).
std::vector<SweepPoint> trim_sweep(const VehicleParams& params, const AeroSpline& spline, const SweepOptions& options);

// One sweep point: trim at (v_i, eta) then settle under the controller.
SweepPoint trim_and_settle(double v_i, double eta, const VehicleParams& params, const AeroSpline& spline,
                           const SweepOptions& options);

struct Discontinuity {
  double eta = 0.0;
  double theta_lo = 0.0;  // trim pitch at v_lo, warm start for refinement
  double collective_lo = 0.0;
  double v_lo = 0.0;      // last speed on the high-AoA branch
  double v_hi = 0.0;      // first speed on the low-AoA branch
  double a_v_lo = 0.0;    // true loading at the v_lo trim
  double a_v_hi = 0.0;
  double alpha_lo = 0.0;  // rad
  double alpha_hi = 0.0;  // rad
};

// Largest drop in trimmed effective AoA between consecutive speeds, per eta.
// Uses the solver equilibria; the settled values can wander where the
// controller fails to hold the trim.
std::vector<Discontinuity> find_discontinuities(const std::vector<SweepPoint>& sweep);

// Narrows a discontinuity by bisection on v_i until v_hi - v_lo < v_tolerance,
// warm-starting each trim from the high-AoA side.
Discontinuity refine_discontinuity(const Discontinuity& coarse, const VehicleParams& params, const AeroSpline& spline,
                                   const TrimOptions& options = {}, double v_tolerance = 1e-3);

}  // namespace tailsitter
