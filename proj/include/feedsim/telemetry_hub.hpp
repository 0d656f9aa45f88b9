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

// Fan-out of telemetry frames to any number of readers. One publisher; each
// subscriber owns an unbounded FIFO so no frame is ever dropped or reordered.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "feedsim/controller.hpp"

namespace feedsim {

class TelemetryHub {
 public:
  class Subscription {
   public:
    // Next frame in publish order. Returns nullopt on timeout, or at once
    // when the hub is closed and everything queued has been read.
    std::optional<TelemetryFrame> next(std::chrono::milliseconds timeout);
    // Closed and drained.
    bool done() const;
    std::size_t pending() const;

   private:
    friend class TelemetryHub;
    void push(const TelemetryFrame& f);
    void close();

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<TelemetryFrame> queue_;
    bool closed_ = false;
  };

  // The newest frame published so far, if any, is queued first.
  std::shared_ptr<Subscription> subscribe();
  void publish(const TelemetryFrame& frame);
  // Ends every stream; later subscribers get the snapshot and then the end.
  void close();

  std::optional<TelemetryFrame> latest() const;
  std::size_t subscribers() const;

 private:
  mutable std::mutex mu_;
  std::optional<TelemetryFrame> latest_;
  std::vector<std::weak_ptr<Subscription>> subs_;
  bool closed_ = false;
};

}  // namespace feedsim
