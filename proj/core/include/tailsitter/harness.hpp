#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailsitter/airfoil.hpp"
#include "tailsitter/analysis.hpp"
#include "tailsitter/config.hpp"
#include "tailsitter/simulation.hpp"
#include "tailsitter/trajectory.hpp"

namespace tailsitter {

// Missing or malformed input data (airfoil tables).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest single-step change of the desired pitch in a run.
struct PitchJump {
  double t = 0.0;
  double magnitude = 0.0;  // rad
  double theta_des_before = 0.0;
  double theta_des_after = 0.0;
  double a_v = 0.0;  // loading at the step

  bool operator==(const PitchJump&) const = default;
};

struct RunSummary {
  std::string scenario;
  double dt = 0.0;
  std::size_t steps = 0;
  double duration = 0.0;
  std::optional<double> max_abs_e_y;
  std::optional<double> max_abs_e_z;
  std::optional<double> max_abs_e_theta;
  std::optional<double> max_pitch_tracking_error;  // |theta - theta_ref| where a pitch reference exists
  std::string settling_quantity;                   // empty when the scenario is not a step
  std::optional<double> settling_time;             // 2% band; empty if never settled
  std::optional<double> accel_duration;            // reference acceleration phase
  std::optional<double> accel_distance;
  std::optional<double> reference_duration;
  std::optional<double> reference_distance;
  std::optional<double> distance;  // vehicle displacement along y
  std::optional<PitchJump> pitch_jump;
  std::size_t saturated_steps = 0;
  std::optional<State> final_state;

  bool operator==(const RunSummary&) const = default;
};

struct RunLog {
  ScenarioConfig config;
  std::vector<StepRecord> records;
  std::optional<Trajectory> reference;
  RunSummary summary;
};

// Airfoil file lookup: $TAILSITTER_DATA_DIR, then the source tree, then the install prefix.
std::string default_airfoil_path();
AeroSpline load_airfoil(const std::string& path);

// Builds the reference and initial condition for `config.scenario` and runs the
// closed loop. Throws ConfigError, DataError or SimulationFailure.
RunLog run_scenario(const ScenarioConfig& config, const AeroSpline& spline);
RunLog run_scenario(const ScenarioConfig& config);

// Time after which |x - target| stays within `band`; empty if it ends outside.
std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& x, double target,
                                    double band);

void write_timeseries_csv(std::ostream& out, const RunLog& log);
std::string summary_json(const RunSummary& summary);
RunSummary summary_from_json(const std::string& text);

// timeseries.csv, summary.json, reference.csv (if any) and four SVG plots.
void emit_outputs(const RunLog& log, const std::string& dir);

void write_bifurcation_csv(std::ostream& out, const BifurcationDiagram& diagram);
void write_trim_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep);
void write_settled_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep);
void write_discontinuities_csv(std::ostream& out, const std::vector<Discontinuity>& found);

}  // namespace tailsitter
