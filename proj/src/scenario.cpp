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

#include "feedsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "feedsim/csv.hpp"

namespace feedsim {

namespace {

// Events scheduled at t fire on the first tick boundary at or after t; the
// slack absorbs the rounding of k * dt.
constexpr double kScheduleSlack = 1e-9;

double finite_number(const YAML::Node& n, const char* what) {
  const double v = n.as<double>();
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
  return v;
}

ScenarioEvent parse_event(const YAML::Node& n) {
  if (!n.IsMap()) throw std::invalid_argument("event must be a map");
  if (!n["t"] || !n["kind"]) throw std::invalid_argument("event needs 't' and 'kind'");
  ScenarioEvent ev;
  ev.t = finite_number(n["t"], "t");
  if (ev.t < 0.0) throw std::invalid_argument("event time must be >= 0");
  const std::string kind = n["kind"].as<std::string>();
  const YAML::Node payload = n["payload"];
  if (kind == "transcript") {
    ev.kind = ScenarioEvent::Kind::Transcript;
    if (payload && payload.IsScalar()) {
      ev.text = payload.as<std::string>();
    } else if (payload && payload.IsMap() && payload["text"]) {
      ev.text = payload["text"].as<std::string>();
    } else {
      throw std::invalid_argument("transcript payload must be text");
    }
  } else if (kind == "sensor") {
    ev.kind = ScenarioEvent::Kind::Sensor;
    if (payload && payload.IsScalar()) {
      ev.distance_mm = finite_number(payload, "distance_mm");
    } else if (payload && payload.IsMap() && payload["distance_mm"]) {
      ev.distance_mm = finite_number(payload["distance_mm"], "distance_mm");
    } else {
      throw std::invalid_argument("sensor payload needs distance_mm");
    }
    if (ev.distance_mm < 0.0) throw std::invalid_argument("distance_mm must be >= 0");
  } else if (kind == "assert") {
    ev.kind = ScenarioEvent::Kind::Assert;
    if (!payload || !payload.IsMap()) throw std::invalid_argument("assert payload must be a map");
    if (payload["state"]) {
      const std::string name = payload["state"].as<std::string>();
      ev.state = parse_controller_state(name);
      if (!ev.state) throw std::invalid_argument("unknown state '" + name + "'");
    }
    if (payload["serves_completed"]) {
      ev.serves_completed = payload["serves_completed"].as<std::size_t>();
    }
    if (!ev.state && !ev.serves_completed) {
      throw std::invalid_argument("assert payload needs 'state' or 'serves_completed'");
    }
  } else {
    throw std::invalid_argument("unknown event kind '" + kind + "'");
  }
  return ev;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  const std::filesystem::path p(path);
  if (base_dir.empty() || p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

SensorTrace merged_trace(const Scenario& sc) {
  std::vector<SensorEvent> events;
  if (sc.sensor_trace) events = SensorTrace::load_csv(*sc.sensor_trace).events();
  for (const auto& ev : sc.events) {
    if (ev.kind == ScenarioEvent::Kind::Sensor) events.push_back({ev.t, ev.distance_mm});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const SensorEvent& a, const SensorEvent& b) { return a.t < b.t; });
  // The constructor rejects two samples at the same time.
  return SensorTrace(std::move(events), SensorTrace::Mode::Scripted);
}

bool is_serve(const std::optional<Command>& c) {
  return c && std::holds_alternative<Serve>(*c);
}

}  // namespace

Scenario parse_scenario(const YAML::Node& doc, const std::string& base_dir) {
  Scenario sc;
  YAML::Node list;
  try {
    if (doc.IsSequence()) {
      list = doc;
    } else if (doc.IsMap()) {
      if (doc["seed"]) sc.seed = doc["seed"].as<std::uint64_t>();
      if (doc["duration"]) {
        sc.duration = finite_number(doc["duration"], "duration");
        if (*sc.duration < 0.0) throw std::invalid_argument("duration must be >= 0");
      }
      if (doc["sensor_trace"]) sc.sensor_trace = resolve(doc["sensor_trace"].as<std::string>(), base_dir);
      list = doc["events"];
      if (list && !list.IsSequence()) throw std::invalid_argument("'events' must be a list");
    } else if (!doc.IsNull()) {
      throw std::invalid_argument("scenario must be a list of events or a map");
    }
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(e.what());
  }
  if (list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      try {
        sc.events.push_back(parse_event(list[i]));
      } catch (const std::exception& e) {
        throw std::invalid_argument("event " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t < b.t; });
  return sc;
}

Scenario load_scenario(const std::string& path) {
  if (!std::filesystem::exists(path)) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_scenario(YAML::LoadFile(path), dir.empty() ? "." : dir);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

ScenarioReport run_scenario(const Scenario& sc, const SessionConfig& cfg,
                            std::optional<std::uint64_t> seed) {
  cfg.validate();
  RobotModel model = load_robot_model(cfg.robot_path);
  Menu menu = load_menu(cfg.menu_path, model);
  SensorTrace trace = merged_trace(sc);

  double end = 0.0;
  if (!sc.events.empty()) end = sc.events.back().t;
  if (trace.end_time()) end = std::max(end, *trace.end_time());
  end = sc.duration ? *sc.duration : end + kScenarioTail;

  Session session(std::move(model), std::move(menu), std::move(trace),
                  seed ? *seed : sc.seed.value_or(0), cfg.dt);
  ScenarioReport report;

  std::size_t next = 0;
  ControllerState prev_state = session.last_frame().state;
  while (true) {
    for (; next < sc.events.size() && sc.events[next].t <= session.now() + kScheduleSlack; ++next) {
      const ScenarioEvent& ev = sc.events[next];
      if (ev.kind == ScenarioEvent::Kind::Transcript) {
        const auto r = session.submit_transcript(ev.text);
        if (!r.ack || !r.ack->accepted) ++report.rejections;
      } else if (ev.kind == ScenarioEvent::Kind::Assert) {
        const TelemetryFrame& f = session.last_frame();
        if (ev.state && f.state != *ev.state) {
          ++report.failed_assertions;
          report.errors.push_back("t=" + fixed6(session.now()) + ": expected state " +
                                  std::string(to_string(*ev.state)) + ", got " +
                                  std::string(to_string(f.state)));
        }
        if (ev.serves_completed && report.serves_completed != *ev.serves_completed) {
          ++report.failed_assertions;
          report.errors.push_back("t=" + fixed6(session.now()) + ": expected " +
                                  std::to_string(*ev.serves_completed) + " completed serves, got " +
                                  std::to_string(report.serves_completed));
        }
      }
    }
    if (session.now() + kScheduleSlack >= end) break;
    const TelemetryFrame& f = session.tick();
    if (prev_state == ControllerState::Presenting && f.state == ControllerState::Returning &&
        is_serve(f.active_command)) {
      ++report.serves_completed;
    }
    prev_state = f.state;
  }

  const SafetyMonitor& mon = session.monitor();
  report.frames = mon.frames_observed();
  report.safety_violations = mon.total_violations();
  for (const auto& m : mon.messages()) report.errors.push_back(m);
  report.final_state = session.last_frame().state;
  report.end_time = session.now();
  if (report.final_state == ControllerState::Presenting) {
    report.warnings.push_back("session ended while presenting (user never cleared)");
  } else if (report.final_state != ControllerState::Idle &&
             report.final_state != ControllerState::Halted) {
    report.warnings.push_back("session ended in " + std::string(to_string(report.final_state)));
  }
  report.telemetry_csv = session.telemetry_csv();
  report.events_csv = session.events_csv();
  return report;
}

}  // namespace feedsim
