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

// Scripted feeding sessions on the fast clock.
//
// A scenario is a YAML document, either a bare list of events or a map:
//
//   seed: 0                      # optional
//   duration: 120                # optional, simulated seconds
//   sensor_trace: trace.csv      # optional, relative to the scenario file
//   events:
//     - {t: 1.0, kind: transcript, payload: "rice"}
//     - {t: 9.0, kind: sensor, payload: {distance_mm: 80}}
//     - {t: 12.0, kind: assert, payload: {state: Presenting}}
//
// Sensor events are merged into the trace before the run. Without an explicit
// duration the run ends 60 s after the last event or trace sample.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feedsim/session.hpp"

namespace YAML {
class Node;
}

namespace feedsim {

inline constexpr double kScenarioTail = 60.0;  // seconds

struct ScenarioEvent {
  enum class Kind { Transcript, Sensor, Assert };
  double t = 0.0;
  Kind kind = Kind::Transcript;
  std::string text;                          // transcript
  double distance_mm = 0.0;                  // sensor
  std::optional<ControllerState> state;      // assert
  std::optional<std::size_t> serves_completed;  // assert
};

struct Scenario {
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<std::string> sensor_trace;  // resolved path
  std::vector<ScenarioEvent> events;        // sorted by t, stable
};

// Throws std::invalid_argument describing the offending event.
Scenario parse_scenario(const YAML::Node& doc, const std::string& base_dir = {});
Scenario load_scenario(const std::string& path);

struct ScenarioReport {
  std::size_t frames = 0;
  std::size_t serves_completed = 0;  // episodes that presented and returned
  std::size_t rejections = 0;
  std::size_t safety_violations = 0;
  std::size_t failed_assertions = 0;
  ControllerState final_state = ControllerState::Idle;
  double end_time = 0.0;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::string telemetry_csv;
  std::string events_csv;

  bool ok() const { return safety_violations == 0 && failed_assertions == 0; }
  int exit_code() const { return ok() ? 0 : 1; }
};

// `cfg` supplies the robot and menu; its trace, clock and duration are
// ignored. `seed` overrides the scenario's own seed.
ScenarioReport run_scenario(const Scenario& scenario, const SessionConfig& cfg,
                            std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace feedsim
