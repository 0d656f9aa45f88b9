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

// One feeding session: a controller wired to the emulated sensor and serial
// link, ticked on a simulated clock, with every frame and request recorded.
//
// Session is single threaded. The service wraps it in a SessionActor; the
// scenario runner drives it directly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feedsim/controller.hpp"
#include "feedsim/hwsim.hpp"
#include "feedsim/json_io.hpp"
#include "feedsim/parser.hpp"
#include "feedsim/safety_monitor.hpp"

namespace feedsim {

enum class ClockMode { Realtime, Fast };
std::string_view to_string(ClockMode c);

inline constexpr double kDefaultManualRunLength = 60.0;  // seconds, fast clock

// Shipped defaults, resolved against the source tree at build time.
std::string default_robot_path();
std::string default_menu_path();

struct SessionConfig {
  std::string robot_path = default_robot_path();
  std::string menu_path = default_menu_path();
  std::optional<std::string> sensor_trace;  // scripted when set, manual otherwise
  ClockMode clock = ClockMode::Realtime;
  std::uint64_t seed = 0;
  double dt = kDefaultSampleDt;
  // Fast clock only: simulated seconds to run. Defaults to the trace end for
  // scripted sensors and kDefaultManualRunLength otherwise.
  std::optional<double> duration;
  // Fast clock only: run to the end straight away. When false the clock
  // moves only on explicit advance requests, which keeps interactive fast
  // sessions reproducible.
  bool autorun = true;

  // Throws std::invalid_argument for dt <= 0 or a negative duration.
  void validate() const;
};

// Missing keys keep the defaults of `base`. Relative paths resolve against
// `base_dir` when it is non-empty.
SessionConfig session_config_from_json(const json& j, const SessionConfig& base = {},
                                       const std::string& base_dir = {});
json to_json(const SessionConfig& cfg);
SessionConfig load_session_config(const std::string& path);

// `t,state,q1,q2,q3,q4,q5,x,y,z,distance_mm,present,command`
std::string telemetry_csv_header();
std::string telemetry_csv_row(const TelemetryFrame& f);

// One operator request as the session saw it.
struct SessionEvent {
  double t = 0.0;     // simulated time the request was applied
  std::string kind;   // transcript | command | reset
  std::string input;
  bool accepted = false;
  std::string detail;  // matched command or rejection reason
};

class Session {
 public:
  Session(RobotModel model, Menu menu, SensorTrace trace, std::uint64_t seed = 0,
          double dt = kDefaultSampleDt);
  // Loads and validates every referenced file; errors name the file.
  explicit Session(const SessionConfig& cfg);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  struct TranscriptResult {
    ParseResult parse;
    std::optional<Ack> ack;  // set when the transcript matched a command
  };
  // The transcript travels over the serial link, is parsed on arrival and the
  // matched command is submitted. Throws std::invalid_argument for frames
  // the link refuses (line breaks, oversize).
  TranscriptResult submit_transcript(std::string_view text);
  Ack submit(const Command& cmd);
  Ack reset();

  // Advances the clock by one dt and records the frame.
  const TelemetryFrame& tick();

  double now() const { return controller_.time(); }
  double dt() const { return dt_; }
  std::uint64_t ticks() const { return ticks_; }
  const TelemetryFrame& last_frame() const { return controller_.last_frame(); }
  const Controller& controller() const { return controller_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const SensorTrace& trace() const { return trace_; }
  const SafetyMonitor& monitor() const { return monitor_; }
  const std::vector<SessionEvent>& events() const { return events_; }
  // Run length for the fast clock given an optional explicit duration.
  double run_length(std::optional<double> duration) const;

  // Every recorded frame, starting with the initial one at t = 0.
  const std::string& telemetry_csv() const { return csv_; }
  std::string events_csv() const;

 private:
  struct Inputs {
    RobotModel model;
    Menu menu;
    SensorTrace trace;
  };
  static Inputs load_inputs(const SessionConfig& cfg);
  Session(Inputs in, std::uint64_t seed, double dt);

  void record(const TelemetryFrame& f);
  void log(std::string kind, std::string input, const Ack& ack, std::string detail);

  Controller controller_;
  SensorTrace trace_;
  Lexicon lexicon_;
  SerialLine line_;
  SafetyMonitor monitor_;
  double dt_;
  std::uint64_t ticks_ = 0;
  std::string csv_;
  std::vector<SessionEvent> events_;
};

}  // namespace feedsim
