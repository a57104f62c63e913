#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailsitter/vehicle.hpp"

namespace tailsitter {

struct AeroSample {
  double alpha_deg;
  double c_l;
  double c_d;
  double c_m;
};

// Full-range (-180..180 deg) airfoil polar. Construct through load_aero_table()
// or AeroTable::from_samples(), both of which enforce the invariants.
class AeroTable {
 public:
  static AeroTable from_samples(std::vector<AeroSample> samples, std::string name = {},
                                double reynolds = 0.0);

  const std::vector<AeroSample>& samples() const { return samples_; }
  const std::string& name() const { return name_; }
  double reynolds() const { return reynolds_; }
  std::size_t size() const { return samples_.size(); }

 private:
  AeroTable() = default;
  std::vector<AeroSample> samples_;
  std::string name_;
  double reynolds_ = 0.0;
};

class AeroTableError : public std::runtime_error {
 public:
  enum class Kind { MalformedRow, DomainGap, NonPeriodic, DuplicateAlpha, NegativeDrag, TooFewRows };
  AeroTableError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Parses `alpha_deg,cl,cd,cm` CSV. Lines starting with '#' before the header may
// carry `name:` and `reynolds:` metadata.
AeroTable load_aero_table(std::istream& source);
AeroTable load_aero_table_file(const std::string& path);

// Analytic flat-plate polar sampled every `step_deg` degrees; used where tests
// must not depend on measured data.
AeroTable flat_plate_table(double step_deg = 1.0);

// Natural cubic spline on a strictly increasing grid.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  // Value and first derivative in one segment lookup.
  std::array<double, 2> evaluate(double x) const;

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;  // m_ holds second derivatives at the knots
};

struct AeroCoefficients {
  double c_l = 0.0;
  double c_d = 0.0;
  double c_m = 0.0;
  double dc_l = 0.0;  // per radian
  double dc_d = 0.0;  // per radian
};

struct AeroForces {
  double lift = 0.0;          // N
  double drag = 0.0;          // N
  double pitch_moment = 0.0;  // N m
};

// C_L, C_D, C_M as smooth functions of angle of attack. The splines are
// parameterised in degrees; public evaluation takes radians. Immutable after
// construction.
class AeroSpline {
 public:
  explicit AeroSpline(const AeroTable& table);

  static constexpr double kUndershootTolerance = 1e-3;

  // Evaluate at a raw degree angle; wraps periodically into [-180, 180].
  AeroCoefficients at_degrees(double alpha_deg) const;
  AeroCoefficients at(double alpha_rad) const;

  const std::string& name() const { return name_; }

 private:
  CubicSpline c_l_, c_d_, c_m_;
  std::string name_;
};

inline AeroSpline fit_spline(const AeroTable& table) { return AeroSpline(table); }
inline AeroCoefficients eval_coeffs(const AeroSpline& spline, double alpha_e) {
  return spline.at(alpha_e);
}

// Maps any finite angle in degrees to [-180, 180).
double wrap_degrees(double alpha_deg);

AeroForces aero_forces(const AeroCoefficients& coeffs, double airspeed, const VehicleParams& params);

}  // namespace tailsitter
