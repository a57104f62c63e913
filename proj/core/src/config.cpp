#include "tailsitter/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace tailsitter {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const std::vector<ScenarioInfo> kScenarios = {
    {"hover-step", "hover position step: start offset (dy, dz) from the hover setpoint"},
    {"hover-attitude-step", "hover attitude step: start with pitch offset dtheta"},
    {"cruise-speed-step", "level cruise speed step: start dv below the reference speed"},
    {"cruise-attitude-step", "level cruise attitude step: start with pitch offset dtheta from trim"},
    {"transition-const-acc", "forward transition at constant acceleration, then hold cruise speed"},
    {"transition-prescribed-aoa", "forward transition with a prescribed angle-of-attack schedule"},
};

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
  }
}

Setter number(double ScenarioConfig::*field, double scale = 1.0) {
  return [field, scale](ScenarioConfig& c, const std::string& v) { c.*field = scale * parse_number("value", v); };
}

template <typename Get>
Setter number_at(Get get, double scale = 1.0) {
  return [get, scale](ScenarioConfig& c, const std::string& v) { get(c) = scale * parse_number("value", v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.name", [](ScenarioConfig& c, const std::string& v) { c.scenario = v; }},
      {"scenario.dt", number(&ScenarioConfig::dt)},
      {"scenario.duration", [](ScenarioConfig& c, const std::string& v) { c.duration = parse_number("duration", v); }},
      {"scenario.control_update",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "hold") {
           c.update = ControlUpdate::ZeroOrderHold;
         } else if (v == "stage") {
           c.update = ControlUpdate::EveryStage;
         } else {
           throw ConfigError(fmt::format("expected 'hold' or 'stage', got '{}'", v));
         }
       }},
      {"scenario.airfoil", [](ScenarioConfig& c, const std::string& v) { c.airfoil = v; }},
      {"scenario.out", [](ScenarioConfig& c, const std::string& v) { c.output_dir = v; }},

      {"vehicle.m", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.m; })},
      {"vehicle.i_xx", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.i_xx; })},
      {"vehicle.l", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.l; })},
      {"vehicle.c_bar", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.c_bar; })},
      {"vehicle.b_span", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.b_span; })},
      {"vehicle.r_prop", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.r_prop; })},
      {"vehicle.t_min", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.t_min; })},
      {"vehicle.t_max", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.t_max_set; })},
      {"vehicle.eta", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.eta; })},
      {"vehicle.rho", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.rho; })},
      {"vehicle.g", number_at([](ScenarioConfig& c) -> double& { return c.vehicle.g; })},

      {"gains.kp_y", number_at([](ScenarioConfig& c) -> double& { return c.gains.kp.x(); })},
      {"gains.kp_z", number_at([](ScenarioConfig& c) -> double& { return c.gains.kp.y(); })},
      {"gains.kd_y", number_at([](ScenarioConfig& c) -> double& { return c.gains.kd.x(); })},
      {"gains.kd_z", number_at([](ScenarioConfig& c) -> double& { return c.gains.kd.y(); })},
      {"gains.k_r", number_at([](ScenarioConfig& c) -> double& { return c.gains.k_r; })},
      {"gains.k_omega", number_at([](ScenarioConfig& c) -> double& { return c.gains.k_omega; })},

      {"trajectory.accel", number(&ScenarioConfig::accel)},
      {"trajectory.cruise_speed", number(&ScenarioConfig::cruise_speed)},
      {"trajectory.hold", number(&ScenarioConfig::hold)},
      {"trajectory.alpha_i_deg", number_at([](ScenarioConfig& c) -> double& { return c.aoa.alpha_i; }, kDeg)},
      {"trajectory.alpha_f_deg", number_at([](ScenarioConfig& c) -> double& { return c.aoa.alpha_f; }, kDeg)},
      {"trajectory.t_star", number_at([](ScenarioConfig& c) -> double& { return c.aoa.t_star; })},
      {"trajectory.aoa_hold", number(&ScenarioConfig::aoa_hold)},
      {"trajectory.shape",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "parabola") {
           c.aoa.shape = AoaShape::Parabola;
         } else if (v == "linear") {
           c.aoa.shape = AoaShape::Linear;
         } else {
           throw ConfigError(fmt::format("trajectory.shape: expected 'parabola' or 'linear', got '{}'", v));
         }
       }},

      {"step.dy", number_at([](ScenarioConfig& c) -> double& { return c.step.dy; })},
      {"step.dz", number_at([](ScenarioConfig& c) -> double& { return c.step.dz; })},
      {"step.dtheta_deg", number_at([](ScenarioConfig& c) -> double& { return c.step.dtheta; }, kDeg)},
      {"step.dv", number_at([](ScenarioConfig& c) -> double& { return c.step.dv; })},
      {"step.cruise_speed", number_at([](ScenarioConfig& c) -> double& { return c.step.cruise_speed; })},
  };
  return table;
}

boost::property_tree::ptree parse_ini(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  return tree;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!is_builtin_scenario(scenario)) throw ConfigError(fmt::format("unknown scenario '{}'", scenario));
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (duration && !(*duration >= 0.0)) throw ConfigError("duration must be non-negative");
  try {
    vehicle.validate();
    gains.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(hold >= 0.0 && aoa_hold >= 0.0)) throw ConfigError("hold times must be non-negative");
  if (!(aoa.t_star > 0.0)) throw ConfigError("trajectory.t_star must be positive");
  if (!(step.cruise_speed > 0.0)) throw ConfigError("step.cruise_speed must be positive");
}

const std::vector<ScenarioInfo>& builtin_scenarios() { return kScenarios; }

bool is_builtin_scenario(const std::string& name) {
  for (const auto& s : kScenarios) {
    if (s.name == name) return true;
  }
  return false;
}

ScenarioConfig default_config(const std::string& scenario) {
  if (!is_builtin_scenario(scenario)) throw ConfigError(fmt::format("unknown scenario '{}'", scenario));
  ScenarioConfig c;
  c.scenario = scenario;
  c.aoa = {90.0 * kDeg, 3.47 * kDeg, 87.0, AoaShape::Parabola};
  if (scenario == "hover-step") {
    c.step.dy = -1.0;
    c.step.dz = -1.0;
  } else if (scenario == "hover-attitude-step") {
    c.step.dtheta = -std::numbers::pi / 4;
  } else if (scenario == "cruise-speed-step") {
    c.step.dv = -3.0;
  } else if (scenario == "cruise-attitude-step") {
    c.step.dtheta = std::numbers::pi / 4;
  }
  return c;
}

void apply_ini(ScenarioConfig& config, std::istream& ini) {
  const auto tree = parse_ini(ini);
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(fmt::format("key '{}' must live inside a [section]", section));
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError(fmt::format("unknown config key '{}'", full));
      try {
        it->second(config, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", full, e.what()));
      }
    }
  }
}

void apply_ini_file(ScenarioConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  apply_ini(config, in);
}

std::optional<std::string> scenario_name_from_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  const auto tree = parse_ini(in);
  if (auto name = tree.get_optional<std::string>("scenario.name")) return *name;
  return std::nullopt;
}

}  // namespace tailsitter
