#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace drivesense {

// Ego frame convention used everywhere: x forward, y left, z up,
// yaw counter-clockwise from +x. Timestamps are integer microseconds.

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double intensity = 0.0;            // 0..255
  int ring = 0;                      // laser channel index
  double vertical_angle_deg = std::numeric_limits<double>::quiet_NaN();
};

/// Vertical angle of a point: the recorded channel angle when present,
/// otherwise derived from the point geometry.
inline double vertical_angle_of(const Point& p) {
  if (std::isfinite(p.vertical_angle_deg)) return p.vertical_angle_deg;
  return std::atan2(p.z, std::hypot(p.x, p.y)) * 180.0 / M_PI;
}

struct PointCloud {
  std::vector<Point> points;
  std::int64_t timestamp_us = 1;
  std::string frame_id = "frame";
};

enum class ObjectClass { car, van, truck };

std::string to_string(ObjectClass c);
ObjectClass object_class_from_string(const std::string& s);

/// Normalizes an angle into (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

/// Oriented 2D box in the ego frame. `l` extends along the heading (yaw),
/// `w` across it.
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double l = 1.0;
  double yaw = 0.0;

  std::array<std::array<double, 2>, 4> corners() const;
  double area() const { return w * l; }
};

struct Detection {
  OrientedBox box;
  ObjectClass cls = ObjectClass::car;
  double score = 1.0;
};

enum class TrackStatus { tentative, confirmed, dead };

std::string to_string(TrackStatus s);
TrackStatus track_status_from_string(const std::string& s);

struct TrackedBox {
  OrientedBox box;
  ObjectClass cls = ObjectClass::car;
  double score = 1.0;
  std::int64_t id = 0;
  double vx = 0.0;
  double vy = 0.0;
  TrackStatus status = TrackStatus::confirmed;
};

/// Unit of exchange with the tracking service: detections in, tracked boxes out.
struct DetectionFrame {
  std::string frame_id;
  std::int64_t timestamp_us = 1;
  std::vector<Detection> boxes;
};

struct TrackedFrame {
  std::string frame_id;
  std::int64_t timestamp_us = 1;
  std::vector<TrackedBox> boxes;
};

// ---------------------------------------------------------------------------
// Error types

/// Malformed input data (bad row, bad field). Message carries the line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid input violating a schema constraint (missing column,
/// out-of-range value, duplicate key).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Frame fed to a tracker session out of timestamp order.
struct OrderingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimulationError : std::runtime_error {
  SimulationError(const std::string& msg, int step)
      : std::runtime_error(msg), step(step) {}
  int step = 0;
};

}  // namespace drivesense
