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

// Emulated periphery: the proximity sensor and the serial text link. See
// docs/wiring.md for the physical pin mapping these stand in for.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "feedsim/command.hpp"

namespace feedsim {

struct SensorEvent {
  double t = 0.0;  // seconds
  double distance_mm = 0.0;
};

// Distance samples replayed with zero-order hold. Scripted traces are fixed
// after load; manual traces grow as the operator reports new distances.
class SensorTrace {
 public:
  enum class Mode { Scripted, Manual };

  SensorTrace() = default;
  // Throws std::invalid_argument unless times strictly increase and every
  // distance is >= 0.
  SensorTrace(std::vector<SensorEvent> events, Mode mode);

  // CSV with header "t,distance_mm".
  static SensorTrace from_csv(std::istream& in);
  static SensorTrace load_csv(const std::string& path);

  // Manual traces only; t must be later than the last event.
  void append(const SensorEvent& e);

  const std::vector<SensorEvent>& events() const { return events_; }
  Mode mode() const { return mode_; }
  std::optional<double> end_time() const;

 private:
  std::vector<SensorEvent> events_;
  Mode mode_ = Mode::Manual;
};

// Reading at time t: the latest event at or before t. Before the first
// event the sensor sees nothing and reports `no_target_mm`.
SensorReading sensor_at(const SensorTrace& trace, double t, double presence_threshold_mm = 150.0,
                        double no_target_mm = 1000.0);

inline constexpr std::size_t kMaxSerialFrameBytes = 256;

// One direction of the serial link. Frames are newline-free UTF-8 strings
// that become readable `latency` seconds after they are sent, in send order.
class SerialChannel {
 public:
  explicit SerialChannel(double latency = 0.0);

  // Returns the delivery time. Throws std::invalid_argument for frames with
  // an embedded newline or longer than kMaxSerialFrameBytes.
  double send(std::string_view frame, double t_now);
  // Removes and returns every frame readable at t_now.
  std::vector<std::string> receive(double t_now);
  std::size_t in_flight() const;
  double latency() const { return latency_; }

 private:
  struct Frame {
    double ready;
    std::uint64_t seq;
    std::string text;
    bool operator>(const Frame& o) const {
      return ready != o.ready ? ready > o.ready : seq > o.seq;
    }
  };

  double latency_;
  mutable std::mutex mu_;
  std::priority_queue<Frame, std::vector<Frame>, std::greater<>> frames_;
  std::uint64_t next_seq_ = 0;
};

// Phone -> controller (inbound) and controller -> phone (outbound).
struct SerialLine {
  explicit SerialLine(double latency = 0.0) : inbound(latency), outbound(latency) {}
  SerialChannel inbound;
  SerialChannel outbound;
};

}  // namespace feedsim
