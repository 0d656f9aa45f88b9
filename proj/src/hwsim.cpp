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

#include "feedsim/hwsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "feedsim/csv.hpp"

namespace feedsim {

namespace {

void check_event(const SensorEvent& e, const SensorEvent* prev) {
  if (!std::isfinite(e.t) || !std::isfinite(e.distance_mm)) {
    throw std::invalid_argument("sensor event values must be finite");
  }
  if (e.distance_mm < 0.0) throw std::invalid_argument("sensor distance must be >= 0");
  if (prev != nullptr && !(e.t > prev->t)) {
    throw std::invalid_argument("sensor event times must be strictly increasing");
  }
}

}  // namespace

SensorTrace::SensorTrace(std::vector<SensorEvent> events, Mode mode)
    : events_(std::move(events)), mode_(mode) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    check_event(events_[i], i == 0 ? nullptr : &events_[i - 1]);
  }
}

SensorTrace SensorTrace::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sensor trace is empty");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "t" || header[1] != "distance_mm") {
    throw std::invalid_argument("sensor trace header must be 't,distance_mm'");
  }
  std::vector<SensorEvent> events;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw std::invalid_argument("sensor trace line " + std::to_string(lineno) +
                                  ": expected 2 fields");
    }
    try {
      events.push_back({parse_double(fields[0]), parse_double(fields[1])});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sensor trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return SensorTrace(std::move(events), Mode::Scripted);
}

SensorTrace SensorTrace::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sensor trace '" + path + "'");
  try {
    return from_csv(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void SensorTrace::append(const SensorEvent& e) {
  if (mode_ != Mode::Manual) throw std::logic_error("scripted sensor traces are immutable");
  check_event(e, events_.empty() ? nullptr : &events_.back());
  events_.push_back(e);
}

std::optional<double> SensorTrace::end_time() const {
  if (events_.empty()) return std::nullopt;
  return events_.back().t;
}

SensorReading sensor_at(const SensorTrace& trace, double t, double presence_threshold_mm,
                        double no_target_mm) {
  if (!(t >= 0.0)) throw std::invalid_argument("sensor query time must be >= 0");
  const auto& ev = trace.events();
  // First event strictly after t; the one before it holds.
  const auto it = std::upper_bound(ev.begin(), ev.end(), t,
                                   [](double v, const SensorEvent& e) { return v < e.t; });
  if (it == ev.begin()) return {t, no_target_mm, false};
  const double d = std::prev(it)->distance_mm;
  return {t, d, d < presence_threshold_mm};
}

SerialChannel::SerialChannel(double latency) : latency_(latency) {
  if (!(latency >= 0.0) || !std::isfinite(latency)) {
    throw std::invalid_argument("serial latency must be >= 0");
  }
}

double SerialChannel::send(std::string_view frame, double t_now) {
  if (frame.find('\n') != std::string_view::npos || frame.find('\r') != std::string_view::npos) {
    throw std::invalid_argument("serial frame must not contain a line break");
  }
  if (frame.size() > kMaxSerialFrameBytes) {
    throw std::invalid_argument("serial frame exceeds " + std::to_string(kMaxSerialFrameBytes) +
                                " bytes");
  }
  const double ready = t_now + latency_;
  std::lock_guard lock(mu_);
  frames_.push({ready, next_seq_++, std::string(frame)});
  return ready;
}

std::vector<std::string> SerialChannel::receive(double t_now) {
  std::vector<std::string> out;
  std::lock_guard lock(mu_);
  while (!frames_.empty() && frames_.top().ready <= t_now) {
    out.push_back(frames_.top().text);
    frames_.pop();
  }
  return out;
}

std::size_t SerialChannel::in_flight() const {
  std::lock_guard lock(mu_);
  return frames_.size();
}

}  // namespace feedsim
