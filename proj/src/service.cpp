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

#include "feedsim/service.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "httplib.h"

#include "feedsim/session_actor.hpp"

namespace feedsim {

namespace {

constexpr auto kStreamPoll = std::chrono::milliseconds(200);

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

SessionConfig service_defaults_from_env() {
  const char* path = std::getenv(kConfigEnvVar);
  if (path == nullptr || *path == '\0') return {};
  return load_session_config(path);
}

struct Service::Impl {
  explicit Impl(SessionConfig d) : defaults(std::move(d)) { routes(); }

  httplib::Server server;
  SessionConfig defaults;

  std::mutex mu;
  std::shared_ptr<SessionActor> actor;
  std::string session_id;
  std::uint64_t next_id = 1;

  std::shared_ptr<SessionActor> active() {
    std::lock_guard lock(mu);
    return actor;
  }

  void end_session() {
    std::shared_ptr<SessionActor> a;
    {
      std::lock_guard lock(mu);
      a = std::move(actor);
      actor.reset();
    }
    if (a) a->stop();
  }

  // Runs `fn(actor, res)` against the live session, mapping errors to
  // status codes: 404 without a session, 400 for bad input, 409 for
  // requests the session state forbids.
  template <class F>
  void with_session(httplib::Response& res, F&& fn) {
    const auto a = active();
    if (!a) return send_error(res, 404, "no active session");
    try {
      fn(*a, res);
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const std::logic_error& e) {
      send_error(res, 409, e.what());
    } catch (const std::exception& e) {
      send_error(res, 410, e.what());
    }
  }

  void start_session(const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu);
    if (actor) return send_error(res, 409, "a session is already active (" + session_id + ")");
    try {
      const SessionConfig cfg = session_config_from_json(body_json(req), defaults);
      auto session = std::make_unique<Session>(cfg);
      actor = std::make_shared<SessionActor>(std::move(session), cfg);
      session_id = "s" + std::to_string(next_id++);
      const TelemetryFrame frame = actor->call([](Session& s) { return s.last_frame(); });
      send_json(res, 201, {{"id", session_id}, {"config", to_json(cfg)}, {"frame", to_json(frame)}});
    } catch (const std::exception& e) {
      send_error(res, 400, e.what());
    }
  }

  void stream_telemetry(const httplib::Request& req, httplib::Response& res) {
    const auto a = active();
    if (!a) return send_error(res, 404, "no active session");
    std::size_t limit = 0;
    if (req.has_param("limit")) {
      try {
        limit = std::stoul(req.get_param_value("limit"));
      } catch (const std::exception&) {
        return send_error(res, 400, "limit must be a non-negative integer");
      }
    }
    auto sub = a->subscribe();
    std::size_t sent = 0;
    res.set_chunked_content_provider(
        "application/x-ndjson",
        [a, sub, limit, sent](std::size_t, httplib::DataSink& sink) mutable {
          for (;;) {
            if (limit != 0 && sent >= limit) {
              sink.done();
              return true;
            }
            if (auto f = sub->next(kStreamPoll)) {
              const std::string line = to_json(*f).dump() + "\n";
              ++sent;
              return sink.write(line.data(), line.size());
            }
            if (sub->done() || (a->finished() && sub->pending() == 0)) {
              sink.done();
              return true;
            }
            if (!sink.is_writable()) return false;
          }
        });
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string what = "internal error";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            what = e.what();
          } catch (...) {
          }
          send_error(res, 500, what);
        });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"ok", true}});
    });

    server.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
      start_session(req, res);
    });

    server.Delete("/session", [this](const httplib::Request&, httplib::Response& res) {
      std::string id;
      {
        std::lock_guard lock(mu);
        id = session_id;
      }
      if (!active()) return send_error(res, 404, "no active session");
      end_session();
      send_json(res, 200, {{"id", id}, {"ended", true}});
    });

    server.Post("/transcript", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        const json body = body_json(req);
        if (!body.contains("text") || !body.at("text").is_string()) {
          throw std::invalid_argument("body needs a string 'text'");
        }
        const std::string text = body.at("text").get<std::string>();
        const json out = a.call([&text](Session& s) {
          const auto result = s.submit_transcript(text);
          return json{{"heard", text},
                      {"t", s.now()},
                      {"parse", to_json(result.parse)},
                      {"ack", result.ack ? to_json(*result.ack) : json(nullptr)}};
        });
        send_json(r, 200, out);
      });
    });

    server.Post("/command", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        const Command cmd = command_from_json(body_json(req));
        const json out = a.call([&cmd](Session& s) {
          return json{{"command", to_json(cmd)}, {"t", s.now()}, {"ack", to_json(s.submit(cmd))}};
        });
        send_json(r, 200, out);
      });
    });

    server.Post("/presence", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        const json body = body_json(req);
        if (!body.contains("present") || !body.at("present").is_boolean()) {
          throw std::invalid_argument("body needs a boolean 'present'");
        }
        const Command cmd = PresenceOverride{body.at("present").get<bool>()};
        const json out = a.call([&cmd](Session& s) {
          return json{{"t", s.now()}, {"ack", to_json(s.submit(cmd))}};
        });
        send_json(r, 200, out);
      });
    });

    server.Post("/reset", [this](const httplib::Request&, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        const json out = a.call([](Session& s) {
          return json{{"t", s.now()}, {"ack", to_json(s.reset())}, {"frame", to_json(s.last_frame())}};
        });
        send_json(r, 200, out);
      });
    });

    server.Post("/advance", [this](const httplib::Request& req, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        const json body = body_json(req);
        if (!body.contains("seconds") || !body.at("seconds").is_number()) {
          throw std::invalid_argument("body needs a number 'seconds'");
        }
        const TelemetryFrame f = a.advance(body.at("seconds").get<double>());
        send_json(r, 200, {{"frame", to_json(f)}});
      });
    });

    server.Get("/state", [this](const httplib::Request&, httplib::Response& res) {
      std::string id;
      {
        std::lock_guard lock(mu);
        id = session_id;
      }
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        json out = a.call([&a](Session& s) {
          return json{{"t", s.now()},
                      {"finished", a.finished()},
                      {"ticks", s.ticks()},
                      {"frame", to_json(s.last_frame())},
                      {"safety_violations", s.monitor().total_violations()},
                      {"sensor_mode", s.trace().mode() == SensorTrace::Mode::Scripted ? "scripted"
                                                                                       : "manual"}};
        });
        out["id"] = id;
        out["clock"] = std::string(to_string(a.clock()));
        send_json(r, 200, out);
      });
    });

    server.Get("/telemetry", [this](const httplib::Request& req, httplib::Response& res) {
      stream_telemetry(req, res);
    });

    server.Get("/telemetry.csv", [this](const httplib::Request&, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        r.set_content(a.call([](Session& s) { return s.telemetry_csv(); }), "text/csv");
      });
    });

    server.Get("/events.csv", [this](const httplib::Request&, httplib::Response& res) {
      with_session(res, [&](SessionActor& a, httplib::Response& r) {
        r.set_content(a.call([](Session& s) { return s.events_csv(); }), "text/csv");
      });
    });

    server.Get("/config", [this](const httplib::Request&, httplib::Response& res) {
      if (const auto a = active()) {
        const SessionConfig cfg = a->config();
        const json out = a->call([&cfg](Session& s) {
          return json{{"robot", to_json(s.controller().model())},
                      {"menu", to_json(s.controller().menu())},
                      {"session", to_json(cfg)}};
        });
        return send_json(res, 200, out);
      }
      try {
        const RobotModel model = load_robot_model(defaults.robot_path);
        const Menu menu = load_menu(defaults.menu_path, model);
        send_json(res, 200,
                  {{"robot", to_json(model)}, {"menu", to_json(menu)}, {"session", to_json(defaults)}});
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    });
  }
};

Service::Service(SessionConfig defaults) : impl_(std::make_unique<Impl>(std::move(defaults))) {}

Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::bind_to_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() {
  impl_->end_session();
  impl_->server.stop();
}

}  // namespace feedsim
