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

#include "feedsim/session_actor.hpp"

#include <chrono>
#include <cmath>

namespace feedsim {

namespace {

constexpr double kTimeSlack = 1e-9;

}  // namespace

SessionActor::SessionActor(std::unique_ptr<Session> session, const SessionConfig& cfg)
    : session_(std::move(session)),
      config_(cfg),
      clock_(cfg.clock),
      run_length_(session_->run_length(cfg.duration)) {
  hub_.publish(session_->last_frame());
  thread_ = std::thread([this] { run(); });
}

SessionActor::~SessionActor() { stop(); }

void SessionActor::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable() && thread_.get_id() != std::this_thread::get_id()) thread_.join();
  hub_.close();
}

void SessionActor::post(std::function<void()> job) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) throw std::runtime_error("session has ended");
    mailbox_.push_back(std::move(job));
  }
  cv_.notify_all();
}

TelemetryFrame SessionActor::advance(double seconds) {
  if (clock_ != ClockMode::Fast) throw std::logic_error("advance needs the fast clock");
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw std::invalid_argument("seconds must be >= 0");
  }
  return call([this, seconds](Session& s) {
    const double until = s.now() + seconds;
    while (s.now() + kTimeSlack < until) tick_and_publish();
    return s.last_frame();
  });
}

void SessionActor::tick_and_publish() { hub_.publish(session_->tick()); }

void SessionActor::run() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto period = std::chrono::duration<double>(session_->dt());
  const bool autorun_fast = clock_ == ClockMode::Fast && config_.autorun;
  if (autorun_fast && session_->now() + kTimeSlack >= run_length_) finished_ = true;

  for (;;) {
    std::deque<std::function<void()>> jobs;
    const bool ticking = clock_ == ClockMode::Realtime || (autorun_fast && !finished_);
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    period * static_cast<double>(session_->ticks() + 1));
    {
      std::unique_lock lock(mu_);
      auto wake = [this] { return stopping_ || !mailbox_.empty(); };
      if (clock_ == ClockMode::Realtime) {
        cv_.wait_until(lock, deadline, wake);
      } else if (!ticking) {
        cv_.wait(lock, wake);
      }
      if (stopping_) break;
      jobs.swap(mailbox_);
    }
    for (auto& job : jobs) job();

    if (!ticking) continue;
    if (clock_ == ClockMode::Realtime && Clock::now() < deadline) continue;
    tick_and_publish();
    if (autorun_fast && session_->now() + kTimeSlack >= run_length_) finished_ = true;
  }

  // Unserved requests fail with broken_promise when their tasks are dropped.
  std::lock_guard lock(mu_);
  mailbox_.clear();
}

}  // namespace feedsim
