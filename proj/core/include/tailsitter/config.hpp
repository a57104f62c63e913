#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailsitter/controller.hpp"
#include "tailsitter/simulation.hpp"
#include "tailsitter/trajectory.hpp"
#include "tailsitter/vehicle.hpp"

namespace tailsitter {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Initial-condition offsets for the step-response scenarios.
struct StepSpec {
  double dy = 0.0;          // m
  double dz = 0.0;          // m
  double dtheta = 0.0;      // rad
  double dv = 0.0;          // m/s
  double cruise_speed = 25.0;  // m/s, cruise steps only
};

struct ScenarioConfig {
  std::string scenario;
  VehicleParams vehicle;
  Gains gains;
  double dt = 0.01;
  std::optional<double> duration;  // s; scenario default when empty
  ControlUpdate update = ControlUpdate::ZeroOrderHold;

  // Constant-acceleration transition.
  double accel = 2.0;          // m/s^2
  double cruise_speed = 25.0;  // m/s
  double hold = 4.0;           // s at cruise speed

  // Prescribed-AoA transition.
  AoaProfile aoa;
  double aoa_hold = 20.0;  // s after t_star

  StepSpec step;

  std::string airfoil;     // empty: default data file
  std::string output_dir;  // empty: caller decides

  void validate() const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

const std::vector<ScenarioInfo>& builtin_scenarios();
bool is_builtin_scenario(const std::string& name);

// Defaults for a built-in scenario; throws ConfigError for unknown names.
ScenarioConfig default_config(const std::string& scenario);

// Overlays an INI document on `config`. Unknown sections or keys are errors.
void apply_ini(ScenarioConfig& config, std::istream& ini);
void apply_ini_file(ScenarioConfig& config, const std::string& path);

// Reads only the [scenario] name key, if present.
std::optional<std::string> scenario_name_from_ini_file(const std::string& path);

}  // namespace tailsitter
