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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace feedsim {

struct Serve {
  std::string slot;
  bool operator==(const Serve&) const = default;
};
struct Stop {
  bool operator==(const Stop&) const = default;
};
struct EmergencyStop {
  bool operator==(const EmergencyStop&) const = default;
};
// Forces the presence flag seen by the controller; this is how the manual
// sensor mode is driven.
struct PresenceOverride {
  bool present = false;
  bool operator==(const PresenceOverride&) const = default;
};

using Command = std::variant<Serve, Stop, EmergencyStop, PresenceOverride>;

// "serve:rice", "stop", "emergency_stop", "presence:on" / "presence:off".
std::string describe(const Command& cmd);

// Proximity sensor sample. The sensor reports a large sentinel distance when
// nothing is in range.
struct SensorReading {
  double t = 0.0;             // seconds
  double distance_mm = 0.0;
  bool present = false;       // distance below the presence threshold
  bool operator==(const SensorReading&) const = default;
};

enum class ControllerState {
  Idle,
  MovingToScoop,
  Scooping,
  MovingToMouth,
  Presenting,
  Returning,
  Halted,
};

std::string_view to_string(ControllerState s);
std::optional<ControllerState> parse_controller_state(std::string_view name);

}  // namespace feedsim
