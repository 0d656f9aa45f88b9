// Copyright 2026 The feedsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "feedsim/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "CLI11.hpp"

#include "feedsim/csv.hpp"
#include "feedsim/ik.hpp"
#include "feedsim/json_io.hpp"
#include "feedsim/plot.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/service.hpp"
#include "feedsim/trajectory.hpp"

namespace feedsim {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

JointVector to_joints(const std::vector<double>& v) {
  JointVector q;
  for (std::size_t i = 0; i < kNumJoints; ++i) q[i] = v.at(i);
  if (!q.is_finite()) throw std::invalid_argument("joint angles must be finite");
  return q;
}

std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

struct Common {
  std::string model_path = default_robot_path();
  std::string menu_path = default_menu_path();
};

int cmd_fk(const Common& c, const std::vector<double>& qv, std::ostream& out) {
  const RobotModel model = load_robot_model(c.model_path);
  const auto fk = forward_kinematics(model, to_joints(qv));
  out << fixed6(fk.position.x()) << ' ' << fixed6(fk.position.y()) << ' '
      << fixed6(fk.position.z()) << '\n';
  const Eigen::Matrix4d& m = fk.pose.matrix();
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) out << (k ? " " : "") << fixed6(m(r, k));
    out << '\n';
  }
  return kExitOk;
}

struct IkArgs {
  std::vector<double> target;
  std::vector<double> seed;
  std::optional<double> pitch;
  double tol = 0.05;
  int max_iter = 200;
};

int cmd_ik(const Common& c, const IkArgs& a, std::ostream& out) {
  const RobotModel model = load_robot_model(c.model_path);
  IKRequest req;
  req.target = {a.target[0], a.target[1], a.target[2]};
  if (a.seed.empty()) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      req.seed[j] = 0.5 * (model.joint_limits[j].min + model.joint_limits[j].max);
    }
  } else {
    req.seed = to_joints(a.seed);
  }
  req.pitch_constraint = a.pitch;
  req.tol = a.tol;
  req.max_iter = a.max_iter;
  const IKResult r = solve_ik(model, req);
  out << to_json(r).dump(2) << '\n';
  return r.converged ? kExitOk : kExitDomain;
}

struct TrajArgs {
  std::vector<double> from;
  std::vector<double> to;
  bool demo = false;
  std::optional<double> hold;
  double speed_scale = 1.0;
  double dt = kDefaultSampleDt;
  std::string out_dir = "out";
};

int cmd_traj(const Common& c, const TrajArgs& a, std::ostream& out) {
  const RobotModel model = load_robot_model(c.model_path);
  JointVector from;
  JointVector to;
  double hold = a.hold.value_or(0.0);
  std::string title = "Spoon tip displacement";
  if (a.demo) {
    const Menu menu = load_menu(c.menu_path, model);
    from = menu.idle_q;
    to = menu.mouth_q;
    hold = a.hold.value_or(menu.timing.min_present_time);
    title = "Idle to mouth, then presenting";
  } else {
    if (a.from.empty() || a.to.empty()) {
      throw CLI::ValidationError("traj", "needs --from and --to, or --demo");
    }
    from = to_joints(a.from);
    to = to_joints(a.to);
  }
  if (!(a.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(hold >= 0.0)) throw std::invalid_argument("hold must be >= 0");

  const Segment seg = plan_segment(model, from, to, a.speed_scale);
  auto points = sample(model, seg, a.dt);
  append_hold(model, points, hold, a.dt);

  const auto dir = prepare_out(a.out_dir);
  std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write '" + (dir / "trajectory.csv").string() + "'");
  write_trajectory_csv(csv, points);
  std::ofstream svg(dir / "displacement.svg", std::ios::binary);
  write_displacement_svg(svg, points, title);

  out << "motion " << fixed6(seg.duration) << " s, hold " << fixed6(hold) << " s, "
      << points.size() << " samples\n";
  out << "wrote " << (dir / "trajectory.csv").string() << '\n';
  out << "wrote " << (dir / "displacement.svg").string() << '\n';
  return kExitOk;
}

int cmd_workspace(const Common& c, int n, const std::string& out_dir, std::ostream& out) {
  const RobotModel model = load_robot_model(c.model_path);
  const auto pts = workspace_sample(model, n);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  double reach = 0.0;
  std::string csv = "x,y,z\n";
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    reach = std::max(reach, (p - model.shoulder_point()).norm());
    csv += fixed6(p.x()) + ',' + fixed6(p.y()) + ',' + fixed6(p.z()) + '\n';
  }
  const auto dir = prepare_out(out_dir);
  write_file(dir / "workspace.csv", csv);
  out << pts.size() << " points\n";
  out << "x [" << fixed6(lo.x()) << ", " << fixed6(hi.x()) << "]\n";
  out << "y [" << fixed6(lo.y()) << ", " << fixed6(hi.y()) << "]\n";
  out << "z [" << fixed6(lo.z()) << ", " << fixed6(hi.z()) << "]\n";
  out << "max distance from shoulder " << fixed6(reach) << '\n';
  out << "wrote " << (dir / "workspace.csv").string() << '\n';
  return kExitOk;
}

int cmd_scenario(const Common& c, const std::string& path, std::optional<std::uint64_t> seed,
                 double dt, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(path);
  SessionConfig cfg;
  cfg.robot_path = c.model_path;
  cfg.menu_path = c.menu_path;
  cfg.dt = dt;
  cfg.clock = ClockMode::Fast;
  const ScenarioReport rep = run_scenario(sc, cfg, seed);

  const auto dir = prepare_out(out_dir);
  write_file(dir / "telemetry.csv", rep.telemetry_csv);
  write_file(dir / "events.csv", rep.events_csv);

  out << "frames " << rep.frames << ", end t=" << fixed6(rep.end_time) << ", final state "
      << to_string(rep.final_state) << '\n';
  out << "serves completed " << rep.serves_completed << ", rejected requests " << rep.rejections
      << '\n';
  out << "safety violations " << rep.safety_violations << ", failed assertions "
      << rep.failed_assertions << '\n';
  out << "wrote " << (dir / "telemetry.csv").string() << '\n';
  out << "wrote " << (dir / "events.csv").string() << '\n';
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  for (const auto& e : rep.errors) err << "violation: " << e << '\n';
  return rep.exit_code();
}

int cmd_serve(const std::string& host, int port, const std::string& config, std::ostream& out) {
  const SessionConfig defaults = config.empty() ? service_defaults_from_env()
                                                : load_session_config(config);
  Service service(defaults);
  g_interrupted = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&service] {
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });
  out << "listening on http://" << host << ':' << port << std::endl;
  const bool ok = service.listen(host, port);
  g_interrupted = true;
  watcher.join();
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feeding-robot twin: kinematics, trajectories, scripted sessions and the service"};
  app.name("feedsim");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--model", common.model_path, "Robot model JSON")->capture_default_str();
  app.add_option("--menu", common.menu_path, "Menu JSON")->capture_default_str();

  std::vector<double> fk_q;
  auto* fk = app.add_subcommand("fk", "Spoon tip position and pose for a joint vector");
  fk->add_option("--q", fk_q, "Five joint angles in degrees, comma separated")
      ->delimiter(',')
      ->expected(static_cast<int>(kNumJoints))
      ->required();

  IkArgs ik_args;
  auto* ik = app.add_subcommand("ik", "Solve joint angles for a spoon tip target");
  ik->add_option("--target", ik_args.target, "x,y,z in inches")->delimiter(',')->expected(3)->required();
  ik->add_option("--seed", ik_args.seed, "Initial joint vector (default: mid-range)")
      ->delimiter(',')
      ->expected(static_cast<int>(kNumJoints));
  ik->add_option("--pitch", ik_args.pitch, "Spoon pitch q2+q3+q4 in degrees");
  ik->add_option("--tol", ik_args.tol, "Position tolerance in inches")->capture_default_str();
  ik->add_option("--max-iter", ik_args.max_iter, "Iteration budget")->capture_default_str();

  TrajArgs traj_args;
  auto* traj = app.add_subcommand("traj", "Sample a joint-space move to CSV and SVG");
  traj->add_option("--from", traj_args.from, "Start joint vector")
      ->delimiter(',')
      ->expected(static_cast<int>(kNumJoints));
  traj->add_option("--to", traj_args.to, "End joint vector")
      ->delimiter(',')
      ->expected(static_cast<int>(kNumJoints));
  traj->add_flag("--demo", traj_args.demo, "Idle pose to mouth pose from the menu");
  traj->add_option("--hold", traj_args.hold, "Seconds to hold the end pose");
  traj->add_option("--speed-scale", traj_args.speed_scale, "Fraction of max joint speed")
      ->capture_default_str();
  traj->add_option("--dt", traj_args.dt, "Sample period in seconds")->capture_default_str();
  traj->add_option("--out", traj_args.out_dir, "Output directory")->capture_default_str();

  int ws_n = 5;
  std::string ws_out = "out";
  auto* ws = app.add_subcommand("workspace", "Grid-sample reachable spoon tip positions");
  ws->add_option("--n", ws_n, "Grid points per joint")->capture_default_str();
  ws->add_option("--out", ws_out, "Output directory")->capture_default_str();

  std::string sc_path;
  std::optional<std::uint64_t> sc_seed;
  double sc_dt = kDefaultSampleDt;
  std::string sc_out = "out";
  auto* sc = app.add_subcommand("scenario", "Run a scripted session on the fast clock");
  sc->add_option("script", sc_path, "Scenario YAML")->required();
  sc->add_option("--seed", sc_seed, "Delay sampler seed (overrides the script)");
  sc->add_option("--dt", sc_dt, "Tick period in seconds")->capture_default_str();
  sc->add_option("--out", sc_out, "Output directory")->capture_default_str();

  std::string host = "127.0.0.1";
  int port = kDefaultPort;
  std::string config;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port")->capture_default_str();
  serve->add_option("--config", config, "Session defaults JSON (else $FEEDSIM_CONFIG)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*fk) return cmd_fk(common, fk_q, out);
    if (*ik) return cmd_ik(common, ik_args, out);
    if (*traj) return cmd_traj(common, traj_args, out);
    if (*ws) return cmd_workspace(common, ws_n, ws_out, out);
    if (*sc) return cmd_scenario(common, sc_path, sc_seed, sc_dt, sc_out, out, err);
    if (*serve) return cmd_serve(host, port, config, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace feedsim
