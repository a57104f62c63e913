#include "tailsitter/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tailsitter/airflow.hpp"
#include "tailsitter/svg_plot.hpp"

namespace tailsitter {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRad2Deg = 180.0 / std::numbers::pi;
constexpr double kDefaultStepDuration = 5.0;
constexpr const char* kDefaultAirfoil = "naca0015_re160k.csv";

struct ScenarioSetup {
  ClosedLoopSetup loop;
  Trajectory reference;
  // Step scenarios: which signal settles, to what, and its 2% band.
  std::string settle_quantity;
  double settle_target = 0.0;
  double settle_band = 0.0;
  std::optional<double> accel_duration;
  std::optional<double> accel_distance;
};

ControlInput even_split(double collective) { return {collective / 2, collective / 2}; }

ScenarioSetup build_setup(const ScenarioConfig& c, const AeroSpline& spline) {
  ScenarioSetup s{ClosedLoopSetup{}, Trajectory(c.dt, {}), "", 0.0, 0.0, std::nullopt, std::nullopt};
  s.loop.params = c.vehicle;
  s.loop.gains = c.gains;
  s.loop.dt = c.dt;
  s.loop.update = c.update;
  const double hover = std::numbers::pi / 2;
  const double weight = c.vehicle.weight();
  double duration = kDefaultStepDuration;

  if (c.scenario == "hover-step" || c.scenario == "hover-attitude-step") {
    s.reference = Trajectory::constant_velocity(Vec2::Zero(), Vec2::Zero(), duration, c.dt);
    s.loop.initial.y = c.step.dy;
    s.loop.initial.z = c.step.dz;
    s.loop.initial.theta = hover + c.step.dtheta;
    s.loop.initial_input = even_split(weight);
    if (c.scenario == "hover-step") {
      s.settle_quantity = "position";
      s.settle_band = 0.02 * std::max(std::abs(c.step.dy), std::abs(c.step.dz));
    } else {
      s.settle_quantity = "theta";
      s.settle_target = hover;
      s.settle_band = 0.02 * std::abs(c.step.dtheta);
    }
  } else if (c.scenario == "cruise-speed-step" || c.scenario == "cruise-attitude-step") {
    const double v = c.step.cruise_speed;
    const TrimPoint trim = trim_solve(v, 0.0, c.vehicle.eta, c.vehicle, spline);
    if (!trim.converged) {
      throw SimulationFailure(0, fmt::format("no level trim found at {} m/s (residual {:.3g})", v, trim.residual));
    }
    s.reference = Trajectory::constant_velocity(Vec2::Zero(), Vec2(v, 0.0), duration, c.dt);
    s.loop.initial.theta = trim.theta_eq + c.step.dtheta;
    s.loop.initial.y_dot = v + c.step.dv;
    s.loop.initial_input = {(trim.collective_eq - trim.differential_eq) / 2,
                            (trim.collective_eq + trim.differential_eq) / 2};
    if (c.scenario == "cruise-speed-step") {
      s.settle_quantity = "speed";
      s.settle_target = v;
      s.settle_band = 0.02 * std::abs(c.step.dv);
    } else {
      s.settle_quantity = "theta";
      s.settle_target = trim.theta_eq;
      s.settle_band = 0.02 * std::abs(c.step.dtheta);
    }
  } else if (c.scenario == "transition-const-acc") {
    s.reference = const_accel_trajectory(c.accel, 0.0, c.cruise_speed, c.hold, c.dt);
    s.accel_duration = c.cruise_speed / c.accel;
    s.accel_distance = 0.5 * c.cruise_speed * *s.accel_duration;
    s.loop.initial.theta = hover;
    s.loop.initial_input = even_split(weight);
    duration = s.reference.duration();
  } else if (c.scenario == "transition-prescribed-aoa") {
    s.reference = prescribed_aoa_trajectory(c.aoa, spline, c.vehicle, c.dt, c.aoa_hold);
    s.loop.initial.theta = hover;
    s.loop.initial_input = even_split(weight);
    duration = s.reference.duration();
  } else {
    throw ConfigError(fmt::format("unknown scenario '{}'", c.scenario));
  }
  s.loop.duration = c.duration.value_or(duration);
  return s;
}

RunSummary summarize(const RunLog& log, const ScenarioSetup& setup, const State& final_state) {
  RunSummary sum;
  sum.scenario = log.config.scenario;
  sum.dt = log.config.dt;
  sum.steps = log.records.size();
  sum.duration = static_cast<double>(log.records.size()) * log.config.dt;
  sum.accel_duration = setup.accel_duration;
  sum.accel_distance = setup.accel_distance;
  if (log.reference && !log.reference->points().empty()) {
    sum.reference_duration = log.reference->duration();
    const auto& pts = log.reference->points();
    sum.reference_distance = (pts.back().r - pts.front().r).norm();
  }
  if (log.records.empty()) return sum;

  sum.final_state = final_state;
  sum.distance = final_state.y - log.records.front().state.y;
  double ey = 0.0, ez = 0.0, et = 0.0;
  std::optional<double> pitch_err;
  for (const auto& r : log.records) {
    ey = std::max(ey, std::abs(r.e_y));
    ez = std::max(ez, std::abs(r.e_z));
    et = std::max(et, std::abs(r.e_theta));
    if (r.theta_ref) {
      const double e = std::abs(wrap_pi(r.state.theta - *r.theta_ref));
      pitch_err = std::max(pitch_err.value_or(0.0), e);
    }
    if (r.saturated_top || r.saturated_bottom) ++sum.saturated_steps;
  }
  sum.max_abs_e_y = ey;
  sum.max_abs_e_z = ez;
  sum.max_abs_e_theta = et;
  sum.max_pitch_tracking_error = pitch_err;

  for (std::size_t k = 1; k < log.records.size(); ++k) {
    const auto& a = log.records[k - 1];
    const auto& b = log.records[k];
    const double step = std::abs(wrap_pi(b.theta_des - a.theta_des));
    if (!sum.pitch_jump || step > sum.pitch_jump->magnitude) {
      sum.pitch_jump = PitchJump{b.t, step, a.theta_des, b.theta_des, aerodynamic_loading(b.airflow.v_a, log.config.vehicle)};
    }
  }

  if (!setup.settle_quantity.empty()) {
    sum.settling_quantity = setup.settle_quantity;
    std::vector<double> t;
    t.reserve(log.records.size());
    for (const auto& r : log.records) t.push_back(r.t);
    auto series = [&](auto get) {
      std::vector<double> x;
      x.reserve(log.records.size());
      for (const auto& r : log.records) x.push_back(get(r));
      return x;
    };
    if (setup.settle_quantity == "position") {
      const auto sy = settling_time(t, series([](const StepRecord& r) { return r.e_y; }), 0.0, setup.settle_band);
      const auto sz = settling_time(t, series([](const StepRecord& r) { return r.e_z; }), 0.0, setup.settle_band);
      if (sy && sz) sum.settling_time = std::max(*sy, *sz);
    } else if (setup.settle_quantity == "theta") {
      sum.settling_time = settling_time(t, series([](const StepRecord& r) { return r.state.theta; }),
                                        setup.settle_target, setup.settle_band);
    } else {
      sum.settling_time = settling_time(
          t, series([](const StepRecord& r) { return std::hypot(r.state.y_dot, r.state.z_dot); }),
          setup.settle_target, setup.settle_band);
    }
  }
  return sum;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string g9(double v) { return fmt::format("{:.9g}", v); }

}  // namespace

std::string default_airfoil_path() {
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("TAILSITTER_DATA_DIR"); env && *env) candidates.emplace_back(env);
  candidates.emplace_back(TAILSITTER_BUILD_DATA_DIR);
  candidates.emplace_back(TAILSITTER_INSTALL_DATA_DIR);
  for (const auto& dir : candidates) {
    const auto p = dir / kDefaultAirfoil;
    if (fs::exists(p)) return p.string();
  }
  // Report the highest-priority location in the eventual error message.
  return (candidates.front() / kDefaultAirfoil).string();
}

AeroSpline load_airfoil(const std::string& path) {
  if (!fs::exists(path)) throw DataError(fmt::format("airfoil file '{}' not found", path));
  try {
    return fit_spline(load_aero_table_file(path));
  } catch (const AeroTableError& e) {
    throw DataError(fmt::format("airfoil file '{}': {}", path, e.what()));
  }
}

std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& x, double target,
                                    double band) {
  if (t.empty() || t.size() != x.size()) return std::nullopt;
  for (std::size_t k = x.size(); k-- > 0;) {
    if (!(std::abs(x[k] - target) <= band)) {
      if (k + 1 == x.size()) return std::nullopt;
      return t[k + 1];
    }
  }
  return t.front();
}

RunLog run_scenario(const ScenarioConfig& config, const AeroSpline& spline) {
  config.validate();
  ScenarioSetup setup = build_setup(config, spline);
  RunLog log;
  log.config = config;
  const auto steps = static_cast<std::size_t>(std::llround(setup.loop.duration / config.dt));
  log.records.reserve(steps);
  const State final_state =
      simulate_closed_loop(setup.loop, setup.reference, spline, [&](const StepRecord& r) { log.records.push_back(r); });
  if (config.scenario.rfind("transition-", 0) == 0) log.reference = setup.reference;
  log.summary = summarize(log, setup, final_state);
  return log;
}

RunLog run_scenario(const ScenarioConfig& config) {
  config.validate();
  return run_scenario(config, load_airfoil(config.airfoil.empty() ? default_airfoil_path() : config.airfoil));
}

void write_timeseries_csv(std::ostream& out, const RunLog& log) {
  out << "t,y,z,theta,y_dot,z_dot,theta_dot,t_top,t_bottom,alpha,alpha_e,gamma,v_a,a_v,lift,drag,m_air,u1,u2,"
         "theta_des,theta_ref,e_y,e_z,e_theta,sat_top,sat_bottom\n";
  for (const auto& r : log.records) {
    const auto& s = r.state;
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", g9(r.t),
                       g9(s.y), g9(s.z), g9(s.theta), g9(s.y_dot), g9(s.z_dot), g9(s.theta_dot), g9(r.input.t_top),
                       g9(r.input.t_bottom), g9(r.airflow.alpha), g9(r.airflow.alpha_e), g9(r.airflow.gamma),
                       g9(r.airflow.v_a), g9(aerodynamic_loading(r.airflow.v_a, log.config.vehicle)),
                       g9(r.forces.lift), g9(r.forces.drag), g9(r.forces.pitch_moment), g9(r.u1), g9(r.u2),
                       g9(r.theta_des), r.theta_ref ? g9(*r.theta_ref) : "", g9(r.e_y), g9(r.e_z), g9(r.e_theta),
                       r.saturated_top ? 1 : 0, r.saturated_bottom ? 1 : 0);
  }
}

std::string summary_json(const RunSummary& s) {
  json j;
  j["scenario"] = s.scenario;
  j["dt"] = s.dt;
  j["steps"] = s.steps;
  j["duration"] = s.duration;
  j["max_abs_e_y"] = opt(s.max_abs_e_y);
  j["max_abs_e_z"] = opt(s.max_abs_e_z);
  j["max_abs_e_theta"] = opt(s.max_abs_e_theta);
  j["max_pitch_tracking_error"] = opt(s.max_pitch_tracking_error);
  j["settling_quantity"] = s.settling_quantity.empty() ? json(nullptr) : json(s.settling_quantity);
  j["settling_time"] = opt(s.settling_time);
  j["accel_duration"] = opt(s.accel_duration);
  j["accel_distance"] = opt(s.accel_distance);
  j["reference_duration"] = opt(s.reference_duration);
  j["reference_distance"] = opt(s.reference_distance);
  j["distance"] = opt(s.distance);
  if (s.pitch_jump) {
    j["pitch_jump"] = {{"t", s.pitch_jump->t},
                       {"magnitude", s.pitch_jump->magnitude},
                       {"theta_des_before", s.pitch_jump->theta_des_before},
                       {"theta_des_after", s.pitch_jump->theta_des_after},
                       {"a_v", s.pitch_jump->a_v}};
  } else {
    j["pitch_jump"] = nullptr;
  }
  j["saturated_steps"] = s.saturated_steps;
  if (s.final_state) {
    const auto& f = *s.final_state;
    j["final_state"] = {{"y", f.y},         {"z", f.z},         {"theta", f.theta},
                        {"y_dot", f.y_dot}, {"z_dot", f.z_dot}, {"theta_dot", f.theta_dot}};
  } else {
    j["final_state"] = nullptr;
  }
  // Full precision so the file parses back to the same doubles.
  return j.dump(2) + "\n";
}

RunSummary summary_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunSummary s;
  s.scenario = j.at("scenario").get<std::string>();
  s.dt = j.at("dt").get<double>();
  s.steps = j.at("steps").get<std::size_t>();
  s.duration = j.at("duration").get<double>();
  s.max_abs_e_y = opt_from(j, "max_abs_e_y");
  s.max_abs_e_z = opt_from(j, "max_abs_e_z");
  s.max_abs_e_theta = opt_from(j, "max_abs_e_theta");
  s.max_pitch_tracking_error = opt_from(j, "max_pitch_tracking_error");
  if (!j.at("settling_quantity").is_null()) s.settling_quantity = j.at("settling_quantity").get<std::string>();
  s.settling_time = opt_from(j, "settling_time");
  s.accel_duration = opt_from(j, "accel_duration");
  s.accel_distance = opt_from(j, "accel_distance");
  s.reference_duration = opt_from(j, "reference_duration");
  s.reference_distance = opt_from(j, "reference_distance");
  s.distance = opt_from(j, "distance");
  if (const auto& pj = j.at("pitch_jump"); !pj.is_null()) {
    s.pitch_jump = PitchJump{pj.at("t").get<double>(), pj.at("magnitude").get<double>(),
                             pj.at("theta_des_before").get<double>(), pj.at("theta_des_after").get<double>(),
                             pj.at("a_v").get<double>()};
  }
  s.saturated_steps = j.at("saturated_steps").get<std::size_t>();
  if (const auto& f = j.at("final_state"); !f.is_null()) {
    s.final_state = State{f.at("y").get<double>(),     f.at("z").get<double>(),     f.at("theta").get<double>(),
                          f.at("y_dot").get<double>(), f.at("z_dot").get<double>(), f.at("theta_dot").get<double>()};
  }
  return s;
}

void emit_outputs(const RunLog& log, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  const fs::path root(dir);

  std::ostringstream csv;
  write_timeseries_csv(csv, log);
  write_file(root / "timeseries.csv", csv.str());
  write_file(root / "summary.json", summary_json(log.summary));
  if (log.reference) {
    std::ostringstream ref;
    write_trajectory_csv(ref, *log.reference);
    write_file(root / "reference.csv", ref.str());
  }

  std::vector<double> t;
  for (const auto& r : log.records) t.push_back(r.t);
  auto col = [&](auto get, double scale = 1.0) {
    std::vector<double> v;
    v.reserve(log.records.size());
    for (const auto& r : log.records) v.push_back(scale * get(r));
    return v;
  };
  auto series = [&](std::string label, std::vector<double> y, bool dashed = false) {
    return svg::Series{std::move(label), t, std::move(y), dashed};
  };
  const std::string title = log.config.scenario;
  const auto& ref = log.reference;
  auto ref_col = [&](auto get) {
    std::vector<double> v;
    for (const auto& r : log.records) v.push_back(ref ? get(ref->at(r.t)) : std::nan(""));
    return v;
  };

  std::vector<svg::Panel> states;
  {
    svg::Panel pos{"position (m)", {}, {}};
    pos.series.push_back(series("y", col([](const StepRecord& r) { return r.state.y; })));
    pos.series.push_back(series("z", col([](const StepRecord& r) { return r.state.z; })));
    if (ref) {
      pos.series.push_back(series("y ref", ref_col([](const TrajectoryPoint& p) { return p.r.x(); }), true));
      pos.series.push_back(series("z ref", ref_col([](const TrajectoryPoint& p) { return p.r.y(); }), true));
    }
    svg::Panel vel{"velocity (m/s)", {}, {}};
    vel.series.push_back(series("y'", col([](const StepRecord& r) { return r.state.y_dot; })));
    vel.series.push_back(series("z'", col([](const StepRecord& r) { return r.state.z_dot; })));
    svg::Panel pitch{"pitch (deg)", {}, {}};
    pitch.series.push_back(series("theta", col([](const StepRecord& r) { return r.state.theta; }, kRad2Deg)));
    pitch.series.push_back(series("theta_des", col([](const StepRecord& r) { return r.theta_des; }, kRad2Deg), true));
    if (!log.records.empty() && log.records.front().theta_ref) {
      pitch.series.push_back(
          series("theta_ref", col([](const StepRecord& r) { return r.theta_ref.value_or(std::nan("")); }, kRad2Deg),
                 true));
    }
    states = {pos, vel, pitch};
  }
  svg::Panel thrust{"thrust per set (N)", {}, {}};
  thrust.series.push_back(series("T_T", col([](const StepRecord& r) { return r.input.t_top; })));
  thrust.series.push_back(series("T_B", col([](const StepRecord& r) { return r.input.t_bottom; })));
  thrust.ref_lines = {{log.config.vehicle.t_min, "T_min"}, {log.config.vehicle.t_max_set, "T_max"}};

  svg::Panel angles{"angle (deg)", {}, {}};
  angles.series.push_back(series("alpha", col([](const StepRecord& r) { return r.airflow.alpha; }, kRad2Deg)));
  angles.series.push_back(series("alpha_e", col([](const StepRecord& r) { return r.airflow.alpha_e; }, kRad2Deg)));
  angles.series.push_back(series("gamma", col([](const StepRecord& r) { return r.airflow.gamma; }, kRad2Deg)));
  svg::Panel loading{"a_v", {}, {}};
  loading.series.push_back(series("a_v", col([&](const StepRecord& r) {
                                    return aerodynamic_loading(r.airflow.v_a, log.config.vehicle);
                                  })));

  svg::Panel pos_err{"position error (m)", {}, {}};
  pos_err.series.push_back(series("e_y", col([](const StepRecord& r) { return r.e_y; })));
  pos_err.series.push_back(series("e_z", col([](const StepRecord& r) { return r.e_z; })));
  svg::Panel att_err{"attitude error (deg)", {}, {}};
  att_err.series.push_back(series("e_theta", col([](const StepRecord& r) { return r.e_theta; }, kRad2Deg)));

  const std::vector<std::pair<const char*, std::vector<svg::Panel>>> figures = {
      {"states.svg", states},
      {"thrusts.svg", {thrust}},
      {"aoa.svg", {angles, loading}},
      {"errors.svg", {pos_err, att_err}},
  };
  for (const auto& [name, panels] : figures) {
    std::ostringstream out;
    svg::write_figure(out, title, "t (s)", panels);
    write_file(root / name, out.str());
  }
}

void write_bifurcation_csv(std::ostream& out, const BifurcationDiagram& diagram) {
  out << "a_v,alpha_deg,p,q,stable\n";
  for (const auto& slice : diagram.slices) {
    for (const auto& e : slice.equilibria) {
      out << fmt::format("{},{},{},{},{}\n", g9(slice.a_v), g9(e.alpha * kRad2Deg), g9(e.p), g9(e.q),
                         e.stable ? 1 : 0);
    }
  }
}

void write_trim_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep) {
  out << "v_i,eta,theta_deg,alpha_e_deg,a_v,collective,differential,converged\n";
  for (const auto& p : sweep) {
    const auto& t = p.trim;
    out << fmt::format("{},{},{},{},{},{},{},{}\n", g9(t.v_i), g9(t.eta), g9(t.theta_eq * kRad2Deg),
                       g9(t.alpha_e_eq * kRad2Deg), g9(t.a_v_true), g9(t.collective_eq), g9(t.differential_eq),
                       t.converged ? 1 : 0);
  }
}

void write_settled_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep) {
  out << "v_i,eta,theta_deg,alpha_e_deg,a_v,collective,differential,finite\n";
  for (const auto& p : sweep) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", g9(p.trim.v_i), g9(p.trim.eta), g9(p.theta * kRad2Deg),
                       g9(p.alpha_e * kRad2Deg), g9(p.a_v_true), g9(p.collective), g9(p.differential),
                       p.settled_finite ? 1 : 0);
  }
}

void write_discontinuities_csv(std::ostream& out, const std::vector<Discontinuity>& found) {
  out << "eta,v_lo,v_hi,a_v_lo,a_v_hi,alpha_lo_deg,alpha_hi_deg\n";
  for (const auto& d : found) {
    out << fmt::format("{},{},{},{},{},{},{}\n", g9(d.eta), g9(d.v_lo), g9(d.v_hi), g9(d.a_v_lo), g9(d.a_v_hi),
                       g9(d.alpha_lo * kRad2Deg), g9(d.alpha_hi * kRad2Deg));
  }
}

}  // namespace tailsitter
