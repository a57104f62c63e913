#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "tailsitter/cli.hpp"
#include "tailsitter/config.hpp"
#include "tailsitter/harness.hpp"

using namespace tailsitter;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tailsitter_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "tailsitter");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Config, BuiltinScenarios) {
  EXPECT_EQ(builtin_scenarios().size(), 6u);
  for (const auto& s : builtin_scenarios()) {
    EXPECT_TRUE(is_builtin_scenario(s.name));
    EXPECT_NO_THROW(default_config(s.name).validate());
  }
  EXPECT_THROW(default_config("loop-the-loop"), ConfigError);
}

TEST(Config, StepSignsAsPublished) {
  EXPECT_NEAR(default_config("hover-attitude-step").step.dtheta, -std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(default_config("cruise-attitude-step").step.dtheta, std::numbers::pi / 4, 1e-15);
  const auto h = default_config("hover-step").step;
  EXPECT_EQ(h.dy, -1.0);
  EXPECT_EQ(h.dz, -1.0);
}

TEST(Config, IniOverlay) {
  auto c = default_config("hover-step");
  std::istringstream ini(
      "[scenario]\ndt = 0.005\nduration = 3\ncontrol_update = stage\n"
      "[vehicle]\neta = 0.5\n[gains]\nkp_y = 9\n[step]\ndtheta_deg = 10\n");
  apply_ini(c, ini);
  EXPECT_EQ(c.dt, 0.005);
  EXPECT_EQ(c.duration, 3.0);
  EXPECT_EQ(c.update, ControlUpdate::EveryStage);
  EXPECT_EQ(c.vehicle.eta, 0.5);
  EXPECT_EQ(c.gains.kp.x(), 9.0);
  EXPECT_NEAR(c.step.dtheta, 10 * std::numbers::pi / 180, 1e-15);
}

TEST(Config, IniRejectsUnknownKeys) {
  auto c = default_config("hover-step");
  std::istringstream bad_key("[vehicle]\nmass = 2\n");
  EXPECT_THROW(apply_ini(c, bad_key), ConfigError);
  std::istringstream bad_value("[vehicle]\nm = heavy\n");
  EXPECT_THROW(apply_ini(c, bad_value), ConfigError);
  std::istringstream bad_range("[vehicle]\neta = 2\n");
  EXPECT_THROW(
      {
        apply_ini(c, bad_range);
        c.validate();
      },
      ConfigError);
}

TEST(SettlingTime, Band) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  EXPECT_EQ(settling_time(t, {1.0, 0.5, 0.1, 0.01, 0.0}, 0.0, 0.02), 3.0);
  EXPECT_FALSE(settling_time(t, {0, 0, 0, 0, 1}, 0.0, 0.02).has_value());
  EXPECT_EQ(settling_time(t, {0, 0, 0, 0, 0}, 0.0, 0.02), 0.0);
}

TEST(Harness, EmptyDurationRun) {
  auto c = default_config("hover-step");
  c.duration = 0.0;
  const auto log = run_scenario(c, testing_support::naca());
  EXPECT_TRUE(log.records.empty());
  std::ostringstream csv;
  write_timeseries_csv(csv, log);
  const auto text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_FALSE(log.summary.max_abs_e_y.has_value());
  EXPECT_NE(summary_json(log.summary).find("null"), std::string::npos);
}

TEST(Harness, SummaryJsonRoundTrip) {
  auto c = default_config("hover-step");
  c.duration = 2.0;
  const auto log = run_scenario(c, testing_support::naca());
  EXPECT_EQ(summary_from_json(summary_json(log.summary)), log.summary);
  auto t = default_config("transition-const-acc");
  t.duration = 13.0;
  const auto tlog = run_scenario(t, testing_support::naca());
  ASSERT_TRUE(tlog.summary.pitch_jump.has_value());
  EXPECT_EQ(summary_from_json(summary_json(tlog.summary)), tlog.summary);
}

TEST(Harness, HoverAtRestStaysPut) {
  auto c = default_config("hover-step");
  c.step = {};
  c.duration = 2.0;
  const auto log = run_scenario(c, testing_support::naca());
  EXPECT_LT(*log.summary.max_abs_e_y, 1e-9);
  EXPECT_LT(*log.summary.max_abs_e_z, 1e-9);
}

TEST(Harness, Deterministic) {
  auto c = default_config("transition-const-acc");
  c.duration = 6.0;
  const auto a = run_scenario(c, testing_support::naca());
  const auto b = run_scenario(c, testing_support::naca());
  std::ostringstream ca, cb;
  write_timeseries_csv(ca, a);
  write_timeseries_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(a.summary, b.summary);
}

TEST(Harness, HoverStepSignSymmetric) {
  // Mirroring the step mirrors the response; settling times match.
  auto c = default_config("hover-attitude-step");
  c.duration = 5.0;
  const auto a = run_scenario(c, testing_support::naca());
  c.step.dtheta = -c.step.dtheta;
  const auto b = run_scenario(c, testing_support::naca());
  ASSERT_EQ(a.summary.settling_time.has_value(), b.summary.settling_time.has_value());
  if (a.summary.settling_time) EXPECT_NEAR(*a.summary.settling_time, *b.summary.settling_time, 0.011);
  ASSERT_TRUE(a.summary.max_abs_e_theta.has_value());
  EXPECT_NEAR(*a.summary.max_abs_e_theta, *b.summary.max_abs_e_theta, 1e-6);
}

TEST(Harness, TimestepHalvingOnHoverStep) {
  auto c = default_config("hover-step");
  const auto a = run_scenario(c, testing_support::naca());
  c.dt = 0.005;
  const auto b = run_scenario(c, testing_support::naca());
  EXPECT_NEAR(*a.summary.max_abs_e_y, *b.summary.max_abs_e_y, 0.01 * *b.summary.max_abs_e_y);
  EXPECT_NEAR(*a.summary.max_abs_e_z, *b.summary.max_abs_e_z, 0.01 * *b.summary.max_abs_e_z);
}

TEST(Harness, MissingAirfoil) { EXPECT_THROW(load_airfoil("/nonexistent/polar.csv"), DataError); }

TEST(Harness, EmitsOutputsWithThrustLimitLines) {
  auto c = default_config("transition-const-acc");
  c.duration = 1.0;
  const auto dir = scratch_dir("emit");
  emit_outputs(run_scenario(c, testing_support::naca()), dir.string());
  for (const char* f : {"timeseries.csv", "summary.json", "reference.csv", "states.svg", "thrusts.svg", "aoa.svg",
                        "errors.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto svg = slurp(dir / "thrusts.svg");
  EXPECT_NE(svg.find("stroke-dasharray=\"2,3\""), std::string::npos);
  EXPECT_NE(svg.find("T_max"), std::string::npos);
  EXPECT_NE(svg.find("T_min"), std::string::npos);
}

TEST(Cli, ListScenarios) {
  std::string out;
  EXPECT_EQ(run_cli({"list-scenarios"}, &out), kExitOk);
  for (const auto& s : builtin_scenarios()) EXPECT_NE(out.find(s.name), std::string::npos);
}

TEST(Cli, MissingAirfoilExitsWithDataError) {
  const auto dir = scratch_dir("cli_missing");
  std::string err;
  EXPECT_EQ(run_cli({"bifurcation", "--airfoil", "/nonexistent.csv", "--out", dir.string()}, nullptr, &err),
            kExitData);
  EXPECT_FALSE(err.empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({"sim", "--scenario", "no-such"}), kExitData);
  EXPECT_EQ(run_cli({"sim", "--bogus"}), kExitUsage);
  EXPECT_EQ(run_cli({}), kExitUsage);
}

TEST(Cli, BifurcationCsv) {
  const auto dir = scratch_dir("cli_bif");
  std::string out;
  ASSERT_EQ(run_cli({"bifurcation", "--airfoil", testing_support::data_path("naca0015_re160k.csv"), "--out",
                     dir.string()},
                    &out),
            kExitOk);
  EXPECT_NE(out.find("fold at a_v = 1.18"), std::string::npos) << out;
  EXPECT_NE(out.find("fold at a_v = 3.8"), std::string::npos) << out;
  const auto csv = slurp(dir / "bifurcation.csv");
  EXPECT_EQ(csv.rfind("a_v,alpha_deg,p,q,stable\n", 0), 0u);
}

TEST(Cli, SimWritesOutputs) {
  const auto dir = scratch_dir("cli_sim");
  const auto ini = dir / "short.ini";
  std::ofstream(ini) << "[scenario]\nduration = 0.5\n";
  ASSERT_EQ(run_cli({"sim", "--scenario", "hover-step", "--config", ini.string(), "--out", dir.string()}), kExitOk);
  EXPECT_TRUE(fs::exists(dir / "timeseries.csv"));
  const auto s = summary_from_json(slurp(dir / "summary.json"));
  EXPECT_EQ(s.steps, 50u);
}
