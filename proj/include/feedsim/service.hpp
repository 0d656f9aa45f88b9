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

// HTTP front end hosting at most one session. Routes and JSON bodies are
// listed in API.md. Handlers never touch the controller; everything goes
// through the session actor's mailbox.

#pragma once

#include <memory>
#include <string>

#include "feedsim/session.hpp"

namespace feedsim {

inline constexpr int kDefaultPort = 8080;
inline constexpr const char* kConfigEnvVar = "FEEDSIM_CONFIG";

// Session defaults: the file named by FEEDSIM_CONFIG when set, otherwise the
// built-in SessionConfig.
SessionConfig service_defaults_from_env();

class Service {
 public:
  // `defaults` seeds every POST /session body.
  explicit Service(SessionConfig defaults = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (or -1); then call
  // listen_after_bind() on a worker thread.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  // Ends the active session and shuts the listener down.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace feedsim
