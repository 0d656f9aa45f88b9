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

#include "feedsim/session.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "feedsim/csv.hpp"

namespace feedsim {

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string string_at(const json& j, const char* key) {
  if (!j.at(key).is_string()) throw std::invalid_argument(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(ClockMode c) { return c == ClockMode::Fast ? "fast" : "realtime"; }

std::string default_robot_path() { return FEEDSIM_DATA_DIR "/config/braccio_default.json"; }
std::string default_menu_path() { return FEEDSIM_DATA_DIR "/config/menu_default.json"; }

void SessionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (duration && (!(*duration >= 0.0) || !std::isfinite(*duration))) {
    throw std::invalid_argument("duration must be >= 0");
  }
}

SessionConfig session_config_from_json(const json& j, const SessionConfig& base,
                                       const std::string& base_dir) {
  if (!j.is_object()) throw std::invalid_argument("session config must be a JSON object");
  SessionConfig cfg = base;
  if (j.contains("robot")) cfg.robot_path = resolve(string_at(j, "robot"), base_dir);
  if (j.contains("menu")) cfg.menu_path = resolve(string_at(j, "menu"), base_dir);
  if (j.contains("sensor")) {
    const json& s = j.at("sensor");
    if (!s.is_object()) throw std::invalid_argument("'sensor' must be an object");
    const std::string mode = s.value("mode", std::string("manual"));
    if (mode == "manual") {
      cfg.sensor_trace.reset();
    } else if (mode == "scripted") {
      if (!s.contains("trace")) throw std::invalid_argument("scripted sensor needs 'trace'");
      cfg.sensor_trace = resolve(string_at(s, "trace"), base_dir);
    } else {
      throw std::invalid_argument("sensor mode must be 'manual' or 'scripted'");
    }
  }
  if (j.contains("clock")) {
    const std::string c = string_at(j, "clock");
    if (c == "fast") {
      cfg.clock = ClockMode::Fast;
    } else if (c == "realtime") {
      cfg.clock = ClockMode::Realtime;
    } else {
      throw std::invalid_argument("clock must be 'realtime' or 'fast'");
    }
  }
  if (j.contains("seed")) {
    const json& seed = j.at("seed");
    const bool ok = seed.is_number_unsigned() ||
                    (seed.is_number_integer() && seed.get<std::int64_t>() >= 0);
    if (!ok) throw std::invalid_argument("seed must be an integer >= 0");
    cfg.seed = seed.get<std::uint64_t>();
  }
  if (j.contains("dt")) {
    if (!j.at("dt").is_number()) throw std::invalid_argument("dt must be a number");
    cfg.dt = j.at("dt").get<double>();
  }
  if (j.contains("duration") && !j.at("duration").is_null()) {
    if (!j.at("duration").is_number()) throw std::invalid_argument("duration must be a number");
    cfg.duration = j.at("duration").get<double>();
  }
  if (j.contains("autorun")) {
    if (!j.at("autorun").is_boolean()) throw std::invalid_argument("autorun must be a boolean");
    cfg.autorun = j.at("autorun").get<bool>();
  }
  cfg.validate();
  return cfg;
}

json to_json(const SessionConfig& cfg) {
  json sensor = {{"mode", cfg.sensor_trace ? "scripted" : "manual"}};
  if (cfg.sensor_trace) sensor["trace"] = *cfg.sensor_trace;
  return {{"robot", cfg.robot_path},
          {"menu", cfg.menu_path},
          {"sensor", sensor},
          {"clock", std::string(to_string(cfg.clock))},
          {"seed", cfg.seed},
          {"dt", cfg.dt},
          {"duration", cfg.duration ? json(*cfg.duration) : json(nullptr)},
          {"autorun", cfg.autorun}};
}

SessionConfig load_session_config(const std::string& path) {
  const json j = read_json_file(path);
  const std::string dir = std::filesystem::path(path).parent_path().string();
  try {
    return session_config_from_json(j, {}, dir.empty() ? "." : dir);
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string telemetry_csv_header() {
  return "t,state,q1,q2,q3,q4,q5,x,y,z,distance_mm,present,command";
}

std::string telemetry_csv_row(const TelemetryFrame& f) {
  std::string row = fixed6(f.t);
  row += ',';
  row += to_string(f.state);
  for (double v : f.q.q) row += ',' + fixed6(v);
  for (int i = 0; i < 3; ++i) row += ',' + fixed6(f.ee[i]);
  row += ',' + fixed6(f.sensor.distance_mm);
  row += f.sensor.present ? ",1," : ",0,";
  if (f.active_command) row += describe(*f.active_command);
  return row;
}

Session::Inputs Session::load_inputs(const SessionConfig& cfg) {
  cfg.validate();
  RobotModel model = load_robot_model(cfg.robot_path);
  Menu menu = load_menu(cfg.menu_path, model);
  SensorTrace trace = cfg.sensor_trace ? SensorTrace::load_csv(*cfg.sensor_trace)
                                       : SensorTrace({}, SensorTrace::Mode::Manual);
  return {std::move(model), std::move(menu), std::move(trace)};
}

Session::Session(const SessionConfig& cfg) : Session(load_inputs(cfg), cfg.seed, cfg.dt) {}

Session::Session(Inputs in, std::uint64_t seed, double dt)
    : Session(std::move(in.model), std::move(in.menu), std::move(in.trace), seed, dt) {}

Session::Session(RobotModel model, Menu menu, SensorTrace trace, std::uint64_t seed, double dt)
    : controller_(std::move(model), std::move(menu), seed),
      trace_(std::move(trace)),
      lexicon_(Lexicon::from_menu(controller_.menu())),
      monitor_(controller_.model(), controller_.menu()),
      dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  lexicon_.validate();
  csv_ = telemetry_csv_header() + '\n';
  record(controller_.last_frame());
}

Session::TranscriptResult Session::submit_transcript(std::string_view text) {
  line_.inbound.send(text, now());
  TranscriptResult result;
  for (const std::string& frame : line_.inbound.receive(now())) {
    result.parse = parse(frame, lexicon_);
    std::string reply;
    if (const auto* cmd = std::get_if<Command>(&result.parse.outcome)) {
      result.ack = controller_.submit(*cmd);
      reply = result.ack->accepted ? "ok " + describe(*cmd) : "rejected " + result.ack->reason;
      log("transcript", frame, *result.ack, describe(*cmd));
    } else {
      const auto& nm = std::get<NoMatch>(result.parse.outcome);
      reply = "nomatch " + std::string(to_string(nm.reason));
      log("transcript", frame, Ack::rejected(reply.substr(8)), "");
    }
    line_.outbound.send(reply, now());
  }
  line_.outbound.receive(now());
  return result;
}

Ack Session::submit(const Command& cmd) {
  const Ack ack = controller_.submit(cmd);
  log("command", describe(cmd), ack, describe(cmd));
  return ack;
}

Ack Session::reset() {
  const Ack ack = controller_.reset();
  if (ack.accepted) monitor_.on_reset();
  log("reset", "", ack, "");
  return ack;
}

const TelemetryFrame& Session::tick() {
  const double t = static_cast<double>(ticks_ + 1) * dt_;
  const SensorReading raw = sensor_at(trace_, t, controller_.menu().timing.presence_threshold_mm,
                                      controller_.menu().timing.no_target_distance_mm);
  controller_.step(t, raw);
  ++ticks_;
  record(controller_.last_frame());
  return controller_.last_frame();
}

double Session::run_length(std::optional<double> duration) const {
  if (duration) return *duration;
  if (trace_.mode() == SensorTrace::Mode::Scripted && trace_.end_time()) return *trace_.end_time();
  return kDefaultManualRunLength;
}

void Session::record(const TelemetryFrame& f) {
  monitor_.observe(f);
  csv_ += telemetry_csv_row(f);
  csv_ += '\n';
}

void Session::log(std::string kind, std::string input, const Ack& ack, std::string detail) {
  events_.push_back({now(), std::move(kind), std::move(input), ack.accepted,
                     ack.accepted ? std::move(detail) : ack.reason});
}

std::string Session::events_csv() const {
  std::string out = "t,kind,input,accepted,detail\n";
  for (const auto& e : events_) {
    out += fixed6(e.t) + ',' + e.kind + ',' + csv_field(e.input) + ',' + (e.accepted ? "1" : "0") +
           ',' + csv_field(e.detail) + '\n';
  }
  return out;
}

}  // namespace feedsim
