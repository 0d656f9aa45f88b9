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

// A Session owned by its own tick thread. Other threads reach it only
// through the mailbox: call() queues a closure that runs on the tick thread
// between ticks and blocks for its result. Frames leave through the hub.

#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include "feedsim/session.hpp"
#include "feedsim/telemetry_hub.hpp"

namespace feedsim {

class SessionActor {
 public:
  // Realtime: one tick per dt of wall time until stopped. Fast with autorun:
  // ticks back to back until the run length, then waits for requests. Fast
  // without autorun: ticks only inside advance().
  SessionActor(std::unique_ptr<Session> session, const SessionConfig& cfg);
  ~SessionActor();

  SessionActor(const SessionActor&) = delete;
  SessionActor& operator=(const SessionActor&) = delete;

  // Runs f(session) on the tick thread and returns its result; exceptions
  // propagate. Throws std::runtime_error once the actor has stopped.
  template <class F>
  auto call(F&& f) -> std::invoke_result_t<F, Session&> {
    using R = std::invoke_result_t<F, Session&>;
    auto task = std::make_shared<std::packaged_task<R()>>(
        [this, fn = std::forward<F>(f)]() mutable { return fn(*session_); });
    std::future<R> result = task->get_future();
    post([task] { (*task)(); });
    return result.get();
  }

  // Fast clock only: ticks for `seconds` of simulated time, publishing every
  // frame, and returns the last one. Throws std::logic_error on realtime.
  TelemetryFrame advance(double seconds);

  std::shared_ptr<TelemetryHub::Subscription> subscribe() { return hub_.subscribe(); }
  // True once an autorun fast session has reached its run length.
  bool finished() const { return finished_.load(); }
  ClockMode clock() const { return clock_; }
  const SessionConfig& config() const { return config_; }

  // Stops the tick thread and ends every telemetry stream. Idempotent.
  void stop();

 private:
  void post(std::function<void()> job);
  void run();
  void tick_and_publish();

  std::unique_ptr<Session> session_;
  SessionConfig config_;
  ClockMode clock_;
  double run_length_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> mailbox_;
  bool stopping_ = false;
  std::atomic<bool> finished_{false};

  TelemetryHub hub_;
  std::thread thread_;
};

}  // namespace feedsim
