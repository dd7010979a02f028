#include "drivesense/services.hpp"

#include <httplib.h>

#include <thread>

#include "drivesense/wire.hpp"

namespace drivesense {

std::string to_string(ServiceErrorKind k) {
  switch (k) {
    case ServiceErrorKind::timeout: return "timeout";
    case ServiceErrorKind::transport: return "transport error";
    case ServiceErrorKind::bad_request: return "bad request";
    case ServiceErrorKind::not_found: return "not found";
    case ServiceErrorKind::conflict: return "conflict";
    case ServiceErrorKind::server_error: return "server error";
    case ServiceErrorKind::bad_response: return "bad response";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// Sessions

std::string SessionManager::create_session(const TrackerConfig& cfg) {
  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::make_shared<Session>(cfg));
  return id;
}

TrackedFrame SessionManager::post_frame(const std::string& session_id,
                                        const DetectionFrame& frame) {
  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + session_id + "'");
    session = it->second;
  }
  // Per-session lock: frame updates are serialized, never interleaved.
  std::lock_guard lock(session->mutex);
  return session->tracker.update_frame(frame);
}

void SessionManager::close_session(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  if (sessions_.erase(session_id) == 0) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
}

size_t SessionManager::open_sessions() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------
// Helpers shared by both servers

namespace {

void write_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

std::pair<std::string, int> split_endpoint(const std::string& endpoint) {
  std::string e = endpoint;
  const std::string prefix = "http://";
  if (e.rfind(prefix, 0) == 0) e = e.substr(prefix.size());
  while (!e.empty() && e.back() == '/') e.pop_back();
  const auto colon = e.rfind(':');
  if (colon == std::string::npos) {
    throw ConfigError("endpoint '" + endpoint + "': expected host:port");
  }
  return {e.substr(0, colon), std::stoi(e.substr(colon + 1))};
}

int start_server(httplib::Server& server, std::thread& thread,
                 const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound <= 0) throw std::runtime_error("failed to bind " + host);
  } else {
    if (!server.bind_to_port(host, port)) {
      throw std::runtime_error("failed to bind " + host + ":" + std::to_string(port));
    }
  }
  thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  return bound;
}

}  // namespace

// ---------------------------------------------------------------------------
// Detection service

struct OdsServer::Impl {
  std::shared_ptr<Detector> detector;
  std::mutex detector_mutex;  // used only for single-use detectors
  httplib::Server server;
  std::thread thread;
};

OdsServer::OdsServer(std::shared_ptr<Detector> detector) : impl_(new Impl) {
  impl_->detector = std::move(detector);
  impl_->server.Post("/v1/detections", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    BevMap map;
    try {
      map = map_payload_from_json(json::parse(req.body));
    } catch (const std::exception& e) {
      write_error(res, 400, std::string("malformed payload: ") + e.what());
      return;
    }
    try {
      std::vector<Detection> dets;
      if (impl_->detector->thread_safe()) {
        dets = impl_->detector->detect(map);
      } else {
        std::lock_guard lock(impl_->detector_mutex);
        dets = impl_->detector->detect(map);
      }
      json out{{"frame_id", map.frame_id}, {"detections", json::array()}};
      for (const Detection& d : dets) out["detections"].push_back(detection_to_json(d));
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      json err{{"error", e.what()}, {"frame_id", map.frame_id}};
      res.status = 500;
      res.set_content(err.dump(), "application/json");
    }
  });
}

OdsServer::~OdsServer() { stop(); }

int OdsServer::start(const std::string& host, int port) {
  port_ = start_server(impl_->server, impl_->thread, host, port);
  return port_;
}

void OdsServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

// ---------------------------------------------------------------------------
// Tracking service

struct MotsServer::Impl {
  SessionManager sessions;
  httplib::Server server;
  std::thread thread;
};

MotsServer::MotsServer() : impl_(new Impl) {
  auto& server = impl_->server;
  auto& sessions = impl_->sessions;

  server.Post("/v1/sessions", [&sessions](const httplib::Request& req,
                                          httplib::Response& res) {
    TrackerConfig cfg;
    try {
      if (!req.body.empty()) cfg = tracker_config_from_json(json::parse(req.body));
      cfg.validate();
    } catch (const std::exception& e) {
      write_error(res, 400, std::string("malformed tracker config: ") + e.what());
      return;
    }
    res.set_content(json{{"session_id", sessions.create_session(cfg)}}.dump(),
                    "application/json");
  });

  server.Post(R"(/v1/sessions/([^/]+)/frames)",
              [&sessions](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                DetectionFrame frame;
                try {
                  frame = detection_frame_from_json(json::parse(req.body));
                } catch (const std::exception& e) {
                  write_error(res, 400, std::string("malformed frame: ") + e.what());
                  return;
                }
                try {
                  const TrackedFrame out = sessions.post_frame(id, frame);
                  res.set_content(tracked_frame_to_json(out).dump(), "application/json");
                } catch (const NotFoundError& e) {
                  write_error(res, 404, e.what());
                } catch (const OrderingError& e) {
                  // out-of-order post; client may retry with a later timestamp
                  write_error(res, 409, e.what());
                } catch (const std::exception& e) {
                  write_error(res, 500, e.what());
                }
              });

  server.Delete(R"(/v1/sessions/([^/]+))",
                [&sessions](const httplib::Request& req, httplib::Response& res) {
                  try {
                    sessions.close_session(req.matches[1]);
                    res.set_content(json{{"closed", true}}.dump(), "application/json");
                  } catch (const NotFoundError& e) {
                    write_error(res, 404, e.what());
                  }
                });
}

MotsServer::~MotsServer() { stop(); }

int MotsServer::start(const std::string& host, int port) {
  port_ = start_server(impl_->server, impl_->thread, host, port);
  return port_;
}

void MotsServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

SessionManager& MotsServer::sessions() { return impl_->sessions; }

// ---------------------------------------------------------------------------
// Clients

namespace {

httplib::Client make_client(const std::string& endpoint, double timeout_s) {
  auto [host, port] = split_endpoint(endpoint);
  httplib::Client client(host, port);
  const auto sec = static_cast<time_t>(timeout_s);
  const auto usec = static_cast<time_t>((timeout_s - sec) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  return client;
}

[[noreturn]] void throw_from_result(const httplib::Result& result) {
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      throw ServiceError(ServiceErrorKind::timeout, httplib::to_string(err));
    }
    throw ServiceError(ServiceErrorKind::transport, httplib::to_string(err));
  }
  std::string message = result->body;
  try {
    const json j = json::parse(result->body);
    if (j.contains("error")) message = j["error"].get<std::string>();
  } catch (...) {
  }
  switch (result->status) {
    case 404: throw ServiceError(ServiceErrorKind::not_found, message);
    case 409: throw ServiceError(ServiceErrorKind::conflict, message);
    default:
      if (result->status >= 400 && result->status < 500) {
        throw ServiceError(ServiceErrorKind::bad_request, message);
      }
      throw ServiceError(ServiceErrorKind::server_error, message);
  }
}

json parse_body(const httplib::Result& result) {
  if (!result || result->status != 200) throw_from_result(result);
  try {
    return json::parse(result->body);
  } catch (const std::exception& e) {
    throw ServiceError(ServiceErrorKind::bad_response, e.what());
  }
}

}  // namespace

struct OdsClient::Impl {
  httplib::Client client;
  Impl(const std::string& endpoint, double timeout_s)
      : client(make_client(endpoint, timeout_s)) {}
};

OdsClient::OdsClient(const std::string& endpoint, double timeout_s)
    : impl_(new Impl(endpoint, timeout_s)) {}

OdsClient::~OdsClient() = default;

std::vector<Detection> OdsClient::request_detections(const BevMap& map) {
  const auto result = impl_->client.Post("/v1/detections",
                                         map_payload_to_json(map).dump(),
                                         "application/json");
  const json body = parse_body(result);
  if (!body.contains("detections") || !body["detections"].is_array()) {
    throw ServiceError(ServiceErrorKind::bad_response, "missing 'detections' array");
  }
  std::vector<Detection> out;
  for (const json& d : body["detections"]) out.push_back(detection_from_json(d));
  return out;
}

struct MotsClient::Impl {
  httplib::Client client;
  Impl(const std::string& endpoint, double timeout_s)
      : client(make_client(endpoint, timeout_s)) {}
};

MotsClient::MotsClient(const std::string& endpoint, double timeout_s)
    : impl_(new Impl(endpoint, timeout_s)) {}

MotsClient::~MotsClient() = default;

std::string MotsClient::create_session(const TrackerConfig& cfg) {
  const auto result = impl_->client.Post("/v1/sessions", tracker_config_to_json(cfg).dump(),
                                         "application/json");
  const json body = parse_body(result);
  if (!body.contains("session_id")) {
    throw ServiceError(ServiceErrorKind::bad_response, "missing 'session_id'");
  }
  return body["session_id"].get<std::string>();
}

TrackedFrame MotsClient::post_frame(const std::string& session_id,
                                    const DetectionFrame& frame) {
  const auto result = impl_->client.Post("/v1/sessions/" + session_id + "/frames",
                                         detection_frame_to_json(frame).dump(),
                                         "application/json");
  return tracked_frame_from_json(parse_body(result));
}

void MotsClient::close_session(const std::string& session_id) {
  const auto result = impl_->client.Delete("/v1/sessions/" + session_id);
  if (!result || result->status != 200) throw_from_result(result);
}

}  // namespace drivesense
