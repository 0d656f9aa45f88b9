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

#include "feedsim/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace feedsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& at(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec3 vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(std::string(what) + " must be an array of 3 numbers");
  }
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

void read_optional(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = number(j.at(key), key);
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

json to_json(const JointVector& q) { return json(q.q); }

JointVector joint_vector_from_json(const json& j) {
  if (!j.is_array() || j.size() != kNumJoints) {
    throw std::invalid_argument("joint vector must be an array of 5 numbers");
  }
  JointVector q;
  for (std::size_t i = 0; i < kNumJoints; ++i) q[i] = number(j[i], "joint angle");
  return q;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

RobotModel robot_model_from_json(const json& j) {
  RobotModel m;
  const json& rows = at(j, "dh_rows");
  if (!rows.is_array() || rows.size() != kNumJoints) {
    throw std::invalid_argument("dh_rows must hold exactly 5 rows");
  }
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const json& r = rows[i];
    m.dh_rows[i] = {number(at(r, "alpha_prev"), "alpha_prev"), number(at(r, "a_prev"), "a_prev"),
                    number(at(r, "d"), "d"), 0.0};
    read_optional(r, "theta_home", m.dh_rows[i].theta_home);
  }
  const json& limits = at(j, "joint_limits");
  if (!limits.is_array() || limits.size() != kNumJoints) {
    throw std::invalid_argument("joint_limits must hold 5 [min,max] pairs");
  }
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (!limits[i].is_array() || limits[i].size() != 2) {
      throw std::invalid_argument("joint_limits entries must be [min,max]");
    }
    m.joint_limits[i] = {number(limits[i][0], "limit"), number(limits[i][1], "limit")};
  }
  const json& speeds = at(j, "max_joint_speed");
  if (!speeds.is_array() || speeds.size() != kNumJoints) {
    throw std::invalid_argument("max_joint_speed must hold 5 numbers");
  }
  for (std::size_t i = 0; i < kNumJoints; ++i) m.max_joint_speed[i] = number(speeds[i], "speed");
  if (j.contains("link_lengths")) {
    for (const auto& l : j.at("link_lengths")) {
      m.link_lengths.emplace_back(at(l, "name").get<std::string>(), number(at(l, "inches"), "inches"));
    }
  }
  m.validate();
  return m;
}

json to_json(const RobotModel& m) {
  json j;
  j["dh_rows"] = json::array();
  for (const auto& r : m.dh_rows) {
    j["dh_rows"].push_back(
        {{"alpha_prev", r.alpha_prev}, {"a_prev", r.a_prev}, {"d", r.d}, {"theta_home", r.theta_home}});
  }
  j["joint_limits"] = json::array();
  for (const auto& l : m.joint_limits) j["joint_limits"].push_back({l.min, l.max});
  j["max_joint_speed"] = m.max_joint_speed;
  j["link_lengths"] = json::array();
  for (const auto& [name, inches] : m.link_lengths) {
    j["link_lengths"].push_back({{"name", name}, {"inches", inches}});
  }
  return j;
}

RobotModel load_robot_model(const std::string& path) {
  return with_path(path, [&] { return robot_model_from_json(read_json_file(path)); });
}

Menu menu_from_json(const json& j) {
  Menu menu;
  for (const auto& s : at(j, "slots")) {
    FoodSlot slot;
    slot.name = at(s, "name").get<std::string>();
    if (s.contains("synonyms")) slot.synonyms = s.at("synonyms").get<std::vector<std::string>>();
    slot.scoop_q = joint_vector_from_json(at(s, "scoop_q"));
    slot.approach_q = joint_vector_from_json(at(s, "approach_q"));
    if (s.contains("bowl")) slot.bowl = vec3_from_json(s.at("bowl"), "bowl");
    menu.slots.push_back(std::move(slot));
  }
  menu.mouth_q = joint_vector_from_json(at(j, "mouth_q"));
  menu.idle_q = joint_vector_from_json(at(j, "idle_q"));
  if (j.contains("timing")) {
    const json& t = j.at("timing");
    TimingConfig& tc = menu.timing;
    read_optional(t, "processing_delay_min", tc.processing_delay_min);
    read_optional(t, "processing_delay_max", tc.processing_delay_max);
    read_optional(t, "presence_threshold_mm", tc.presence_threshold_mm);
    read_optional(t, "clear_debounce", tc.clear_debounce);
    read_optional(t, "min_present_time", tc.min_present_time);
    read_optional(t, "scoop_dwell", tc.scoop_dwell);
    read_optional(t, "speed_scale", tc.speed_scale);
    read_optional(t, "no_target_distance_mm", tc.no_target_distance_mm);
  }
  if (j.contains("workspace_box")) {
    const json& b = j.at("workspace_box");
    menu.workspace.min = vec3_from_json(at(b, "min"), "workspace_box.min");
    menu.workspace.max = vec3_from_json(at(b, "max"), "workspace_box.max");
  }
  return menu;
}

json to_json(const Menu& menu) {
  json j;
  j["slots"] = json::array();
  for (const auto& s : menu.slots) {
    json js = {{"name", s.name},
               {"synonyms", s.synonyms},
               {"scoop_q", to_json(s.scoop_q)},
               {"approach_q", to_json(s.approach_q)}};
    if (s.bowl) js["bowl"] = to_json(*s.bowl);
    j["slots"].push_back(std::move(js));
  }
  j["mouth_q"] = to_json(menu.mouth_q);
  j["idle_q"] = to_json(menu.idle_q);
  const TimingConfig& t = menu.timing;
  j["timing"] = {{"processing_delay_min", t.processing_delay_min},
                 {"processing_delay_max", t.processing_delay_max},
                 {"presence_threshold_mm", t.presence_threshold_mm},
                 {"clear_debounce", t.clear_debounce},
                 {"min_present_time", t.min_present_time},
                 {"scoop_dwell", t.scoop_dwell},
                 {"speed_scale", t.speed_scale},
                 {"no_target_distance_mm", t.no_target_distance_mm}};
  j["workspace_box"] = {{"min", to_json(menu.workspace.min)}, {"max", to_json(menu.workspace.max)}};
  return j;
}

Menu load_menu(const std::string& path, const RobotModel& model) {
  return with_path(path, [&] {
    Menu m = menu_from_json(read_json_file(path));
    m.validate(model);
    return m;
  });
}

json to_json(const Command& cmd) {
  return std::visit(Overloaded{
                        [](const Serve& s) { return json{{"command", "serve"}, {"slot", s.slot}}; },
                        [](const Stop&) { return json{{"command", "stop"}}; },
                        [](const EmergencyStop&) { return json{{"command", "emergency_stop"}}; },
                        [](const PresenceOverride& p) {
                          return json{{"command", "presence"}, {"present", p.present}};
                        },
                    },
                    cmd);
}

Command command_from_json(const json& j) {
  const json& kind = at(j, "command");
  if (!kind.is_string()) throw std::invalid_argument("'command' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "serve") {
    const json& slot = at(j, "slot");
    if (!slot.is_string()) throw std::invalid_argument("'slot' must be a string");
    return Serve{slot.get<std::string>()};
  }
  if (k == "stop") return Stop{};
  if (k == "emergency_stop") return EmergencyStop{};
  if (k == "presence") {
    const json& p = at(j, "present");
    if (!p.is_boolean()) throw std::invalid_argument("'present' must be a boolean");
    return PresenceOverride{p.get<bool>()};
  }
  throw std::invalid_argument("unknown command '" + k + "'");
}

json to_json(const SensorReading& s) {
  return {{"t", s.t}, {"distance_mm", s.distance_mm}, {"present", s.present}};
}

json to_json(const TelemetryFrame& f) {
  return {{"t", f.t},
          {"state", std::string(to_string(f.state))},
          {"q", to_json(f.q)},
          {"ee", to_json(f.ee)},
          {"sensor", to_json(f.sensor)},
          {"active_command", f.active_command ? to_json(*f.active_command) : json(nullptr)}};
}

json to_json(const IKResult& r) {
  json j = {{"q", to_json(r.q)},
            {"achieved", to_json(r.achieved)},
            {"residual", r.residual},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"reachable", r.reachable}};
  j["pitch_error"] = r.pitch_error ? json(*r.pitch_error) : json(nullptr);
  return j;
}

json to_json(const ParseResult& r) {
  json j = {{"normalized", r.normalized}};
  if (const auto* cmd = std::get_if<Command>(&r.outcome)) {
    j["matched"] = true;
    j["command"] = to_json(*cmd);
    j["spelling"] = r.matched;
    j["distance"] = r.distance;
  } else {
    const auto& nm = std::get<NoMatch>(r.outcome);
    j["matched"] = false;
    j["reason"] = std::string(to_string(nm.reason));
    j["best_candidate"] = nm.best_candidate;
    j["distance"] = nm.distance;
  }
  return j;
}

json to_json(const Ack& a) {
  json j = {{"accepted", a.accepted}};
  j["reason"] = a.accepted ? json(nullptr) : json(a.reason);
  return j;
}

}  // namespace feedsim
