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

// JSON documents: robot model and menu files, plus the wire encodings used
// by the service and the CLI. Schemas are listed in API.md.

#pragma once

#include <string>

#include "json.hpp"

#include "feedsim/controller.hpp"
#include "feedsim/ik.hpp"
#include "feedsim/kinematics.hpp"
#include "feedsim/menu.hpp"
#include "feedsim/parser.hpp"

namespace feedsim {

using nlohmann::json;

// Loaders throw std::invalid_argument with the file path in the message
// when the file is missing, malformed or fails validation.
RobotModel robot_model_from_json(const json& j);
json to_json(const RobotModel& model);
RobotModel load_robot_model(const std::string& path);

Menu menu_from_json(const json& j);
json to_json(const Menu& menu);
// Validates against `model`.
Menu load_menu(const std::string& path, const RobotModel& model);

json to_json(const JointVector& q);
JointVector joint_vector_from_json(const json& j);
json to_json(const Vec3& v);

json to_json(const Command& cmd);
// {"command":"serve","slot":"rice"} | {"command":"stop"} |
// {"command":"emergency_stop"} | {"command":"presence","present":true}
Command command_from_json(const json& j);

json to_json(const SensorReading& s);
json to_json(const TelemetryFrame& f);
json to_json(const IKResult& r);
json to_json(const ParseResult& r);
json to_json(const Ack& a);

json read_json_file(const std::string& path);

}  // namespace feedsim
