#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/harness.hpp"

namespace testing_support {

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline std::string data_path(const std::string& file) { return std::string(TAILSITTER_TEST_DATA_DIR) + "/" + file; }

inline const tailsitter::AeroSpline& naca() {
  static const tailsitter::AeroSpline spline = tailsitter::load_airfoil(data_path("naca0015_re160k.csv"));
  return spline;
}

inline const tailsitter::AeroSpline& flat_plate() {
  static const tailsitter::AeroSpline spline(tailsitter::flat_plate_table());
  return spline;
}

// No aerodynamics at all, for closed-form ballistic checks.
inline const tailsitter::AeroSpline& no_air() {
  static const tailsitter::AeroSpline spline(tailsitter::AeroTable::from_samples(
      {{-180, 0, 0, 0}, {-90, 0, 0, 0}, {90, 0, 0, 0}, {180, 0, 0, 0}}, "none"));
  return spline;
}

// Table over [-180, 180] sampled from closed forms of alpha in radians.
inline tailsitter::AeroTable table_from(const std::function<double(double)>& c_l,
                                        const std::function<double(double)>& c_d,
                                        const std::function<double(double)>& c_m, double step_deg = 1.0) {
  std::vector<tailsitter::AeroSample> s;
  const int n = static_cast<int>(std::lround(360.0 / step_deg));
  for (int i = 0; i <= n; ++i) {
    const double deg = -180.0 + i * step_deg;
    const double a = deg * kDeg;
    s.push_back({deg, c_l(a), c_d(a), c_m(a)});
  }
  // Closed forms are periodic up to rounding; force exact endpoint equality.
  s.back().c_l = s.front().c_l;
  s.back().c_d = s.front().c_d;
  s.back().c_m = s.front().c_m;
  return tailsitter::AeroTable::from_samples(std::move(s));
}

}  // namespace testing_support
