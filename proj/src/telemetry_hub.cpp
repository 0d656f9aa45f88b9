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

#include "feedsim/telemetry_hub.hpp"

#include <algorithm>

namespace feedsim {

std::optional<TelemetryFrame> TelemetryHub::Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  TelemetryFrame f = std::move(queue_.front());
  queue_.pop_front();
  return f;
}

bool TelemetryHub::Subscription::done() const {
  std::lock_guard lock(mu_);
  return closed_ && queue_.empty();
}

std::size_t TelemetryHub::Subscription::pending() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

void TelemetryHub::Subscription::push(const TelemetryFrame& f) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(f);
  }
  cv_.notify_one();
}

void TelemetryHub::Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::shared_ptr<TelemetryHub::Subscription> TelemetryHub::subscribe() {
  auto sub = std::make_shared<Subscription>();
  std::lock_guard lock(mu_);
  if (latest_) sub->push(*latest_);
  if (closed_) {
    sub->close();
  } else {
    subs_.push_back(sub);
  }
  return sub;
}

void TelemetryHub::publish(const TelemetryFrame& frame) {
  std::lock_guard lock(mu_);
  if (closed_) return;
  latest_ = frame;
  std::erase_if(subs_, [](const std::weak_ptr<Subscription>& w) { return w.expired(); });
  for (const auto& w : subs_) {
    if (auto s = w.lock()) s->push(frame);
  }
}

void TelemetryHub::close() {
  std::lock_guard lock(mu_);
  closed_ = true;
  for (const auto& w : subs_) {
    if (auto s = w.lock()) s->close();
  }
  subs_.clear();
}

std::optional<TelemetryFrame> TelemetryHub::latest() const {
  std::lock_guard lock(mu_);
  return latest_;
}

std::size_t TelemetryHub::subscribers() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(subs_.begin(), subs_.end(), [](const auto& w) { return !w.expired(); }));
}

}  // namespace feedsim
