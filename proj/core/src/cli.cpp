#include "tailsitter/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tailsitter/analysis.hpp"
#include "tailsitter/harness.hpp"

namespace tailsitter {

namespace {

struct Options {
  std::string config;
  std::string airfoil;
  std::optional<std::string> out;
  std::string scenario;
  std::optional<double> dt;
  std::optional<double> eta;
  double a_v_min = 0.0;
  double a_v_max = 8.0;
  double a_v_step = 0.01;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  f << text;
  if (!f) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
}

// Scenario defaults, then the config file, then command-line flags.
ScenarioConfig resolve_config(const Options& o) {
  std::string name = o.scenario;
  if (name.empty() && !o.config.empty()) name = scenario_name_from_ini_file(o.config).value_or("");
  if (name.empty()) name = "hover-step";
  ScenarioConfig c = default_config(name);
  if (!o.config.empty()) apply_ini_file(c, o.config);
  if (!o.scenario.empty()) c.scenario = o.scenario;
  if (!o.airfoil.empty()) c.airfoil = o.airfoil;
  if (o.dt) c.dt = *o.dt;
  if (o.eta) c.vehicle.eta = *o.eta;
  if (o.out) {
    c.output_dir = *o.out;
  } else if (c.output_dir.empty()) {
    c.output_dir = "out";
  }
  c.validate();
  return c;
}

std::string airfoil_for(const ScenarioConfig& c) { return c.airfoil.empty() ? default_airfoil_path() : c.airfoil; }

int run_sim(const Options& o, std::ostream& out) {
  const ScenarioConfig c = resolve_config(o);
  const RunLog log = run_scenario(c, load_airfoil(airfoil_for(c)));
  emit_outputs(log, c.output_dir);
  const auto& s = log.summary;
  out << fmt::format("{}: {} steps, dt = {} s -> {}\n", c.scenario, s.steps, c.dt, c.output_dir);
  if (s.max_abs_e_y) out << fmt::format("  max |e_y| = {:.4g} m, max |e_z| = {:.4g} m\n", *s.max_abs_e_y, *s.max_abs_e_z);
  if (!s.settling_quantity.empty()) {
    out << fmt::format("  settling ({}): {}\n", s.settling_quantity,
                       s.settling_time ? fmt::format("{:.3f} s", *s.settling_time) : "not settled");
  }
  if (s.pitch_jump) {
    out << fmt::format("  largest theta_des step: {:.2f} deg at t = {:.2f} s (a_v = {:.3f})\n",
                       s.pitch_jump->magnitude * 180.0 / 3.141592653589793, s.pitch_jump->t, s.pitch_jump->a_v);
  }
  return kExitOk;
}

int run_trim_sweep(const Options& o, std::ostream& out) {
  ScenarioConfig c = resolve_config(o);
  const AeroSpline spline = load_airfoil(airfoil_for(c));
  SweepOptions opts = SweepOptions::defaults();
  opts.dt = c.dt;
  opts.gains = c.gains;
  if (o.eta) opts.etas = {*o.eta};
  const auto sweep = trim_sweep(c.vehicle, spline, opts);
  std::vector<Discontinuity> found;
  for (const auto& d : find_discontinuities(sweep)) found.push_back(refine_discontinuity(d, c.vehicle, spline, opts.trim));

  ensure_dir(c.output_dir);
  const std::filesystem::path root(c.output_dir);
  std::ostringstream trim, settled, disc;
  write_trim_sweep_csv(trim, sweep);
  write_settled_sweep_csv(settled, sweep);
  write_discontinuities_csv(disc, found);
  write_text(root / "trim_sweep.csv", trim.str());
  write_text(root / "trim_settled.csv", settled.str());
  write_text(root / "discontinuities.csv", disc.str());

  std::size_t unconverged = 0;
  for (const auto& p : sweep) unconverged += p.trim.converged ? 0 : 1;
  out << fmt::format("{} trim points ({} not converged) -> {}\n", sweep.size(), unconverged, c.output_dir);
  for (const auto& d : found) {
    out << fmt::format("  eta = {:.2f}: AoA jump at v_i = {:.3f} m/s, a_v = {:.3f}\n", d.eta, d.v_lo, d.a_v_lo);
  }
  return kExitOk;
}

int run_bifurcation(const Options& o, std::ostream& out) {
  const ScenarioConfig c = resolve_config(o);
  const AeroSpline spline = load_airfoil(airfoil_for(c));
  if (!(o.a_v_min >= 0.0 && o.a_v_max > o.a_v_min && o.a_v_step > 0.0)) {
    throw ConfigError("bifurcation range needs 0 <= min < max and step > 0");
  }
  const auto diagram = bifurcation_scan(o.a_v_min, o.a_v_max, o.a_v_step, spline);
  ensure_dir(c.output_dir);
  std::ostringstream csv;
  write_bifurcation_csv(csv, diagram);
  write_text(std::filesystem::path(c.output_dir) / "bifurcation.csv", csv.str());
  out << fmt::format("{} slices -> {}\n", diagram.slices.size(), c.output_dir);
  for (double f : diagram.folds) out << fmt::format("  fold at a_v = {:.4f}\n", f);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar tailsitter flight-dynamics simulator", "tailsitter"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--airfoil", o.airfoil, "airfoil table (alpha_deg,cl,cd,cm)");
    sub->add_option("--out", o.out, "output directory (default: out)");
    sub->add_option("--dt", o.dt, "integration step (s)")->check(CLI::PositiveNumber);
    sub->add_option("--eta", o.eta, "prop-wash efficiency")->check(CLI::Range(0.0, 1.0));
  };

  auto* sim = app.add_subcommand("sim", "run a scenario and write timeseries, summary and plots");
  add_common(sim);
  sim->add_option("--scenario", o.scenario, "built-in scenario name (see list-scenarios)");

  auto* sweep = app.add_subcommand("trim-sweep", "trim and settle over v_i = 1..30 m/s and eta = 0..1");
  add_common(sweep);

  auto* bif = app.add_subcommand("bifurcation", "equilibrium AoA and stability versus aerodynamic loading");
  add_common(bif);
  bif->add_option("--min", o.a_v_min, "smallest a_v")->capture_default_str();
  bif->add_option("--max", o.a_v_max, "largest a_v")->capture_default_str();
  bif->add_option("--step", o.a_v_step, "a_v grid step")->capture_default_str();

  auto* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& s : builtin_scenarios()) out << fmt::format("{:<26} {}\n", s.name, s.description);
      return kExitOk;
    }
    if (sim->parsed()) return run_sim(o, out);
    if (sweep->parsed()) return run_trim_sweep(o, out);
    return run_bifurcation(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitData;
  } catch (const TrajectoryError& e) {
    err << "trajectory error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SimulationFailure& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NonFiniteState& e) {
    err << "simulation failed: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace tailsitter
