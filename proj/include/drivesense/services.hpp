#pragma once

#include <memory>
#include <mutex>

#include "drivesense/detector.hpp"
#include "drivesense/tracking.hpp"

namespace drivesense {

enum class ServiceErrorKind {
  timeout,
  transport,     // connect/read failure
  bad_request,   // 4xx
  not_found,     // 404
  conflict,      // 409 (e.g. out-of-order frame)
  server_error,  // 5xx
  bad_response,  // unparseable body
};

std::string to_string(ServiceErrorKind k);

struct ServiceError : std::runtime_error {
  ServiceError(ServiceErrorKind kind, const std::string& msg)
      : std::runtime_error(to_string(kind) + ": " + msg), kind(kind) {}
  ServiceErrorKind kind;
};

/// In-process tracking sessions, shared by the HTTP service and library
/// callers. Frame updates within one session are strictly serialized;
/// sessions are isolated and may progress concurrently.
class SessionManager {
 public:
  std::string create_session(const TrackerConfig& cfg);
  TrackedFrame post_frame(const std::string& session_id, const DetectionFrame& frame);
  void close_session(const std::string& session_id);
  size_t open_sessions() const;

 private:
  struct Session {
    std::mutex mutex;
    Tracker tracker;
    explicit Session(const TrackerConfig& cfg) : tracker(cfg) {}
  };
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  int next_id_ = 1;
};

/// Detection service: POST /v1/detections with a map payload returns
/// {frame_id, detections:[...]}. Stateless per request.
class OdsServer {
 public:
  explicit OdsServer(std::shared_ptr<Detector> detector);
  ~OdsServer();

  /// Binds and serves on a background thread. port 0 picks a free port.
  /// Returns the bound port.
  int start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

/// Tracking service:
///   POST   /v1/sessions              (TrackerConfig)  -> {session_id}
///   POST   /v1/sessions/{id}/frames  (DetectionFrame) -> TrackedFrame
///   DELETE /v1/sessions/{id}
class MotsServer {
 public:
  MotsServer();
  ~MotsServer();

  int start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

class OdsClient {
 public:
  /// endpoint: "host:port" or "http://host:port"
  explicit OdsClient(const std::string& endpoint, double timeout_s = 10.0);
  ~OdsClient();

  std::vector<Detection> request_detections(const BevMap& map);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class MotsClient {
 public:
  explicit MotsClient(const std::string& endpoint, double timeout_s = 10.0);
  ~MotsClient();

  std::string create_session(const TrackerConfig& cfg);
  TrackedFrame post_frame(const std::string& session_id, const DetectionFrame& frame);
  void close_session(const std::string& session_id);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Detector backed by a remote detection service; lets the full-azimuth
/// wrapper and the pipeline call a served model transparently.
class RemoteDetector : public Detector {
 public:
  explicit RemoteDetector(const std::string& endpoint, double timeout_s = 10.0)
      : client_(endpoint, timeout_s) {}

  std::vector<Detection> detect(const BevMap& map) override {
    return client_.request_detections(map);
  }

 private:
  OdsClient client_;
};

}  // namespace drivesense
