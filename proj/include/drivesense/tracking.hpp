#pragma once

#include <Eigen/Dense>

#include "drivesense/types.hpp"

namespace drivesense {

/// Planar constant-velocity filter state: (x, y, vx, vy).
struct KalmanState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
};

struct TrackerConfig {
  int confirm_hits = 3;
  int max_misses = 5;
  double gate_iou = 0.1;
  double process_noise_accel_sigma = 1.0;  // m/s^2
  double meas_noise_sigma = 0.3;           // m
  double extents_smoothing_alpha = 0.3;
  double init_velocity_var = 1e2;

  void validate() const;
};

struct Track {
  std::int64_t id = 0;
  KalmanState state;
  double w = 1.0;
  double l = 1.0;
  double yaw = 0.0;
  ObjectClass cls = ObjectClass::car;
  double score = 1.0;
  TrackStatus status = TrackStatus::tentative;
  int hit_streak = 0;
  int miss_streak = 0;
  std::int64_t last_update_us = 0;

  OrientedBox box() const {
    return {state.mean[0], state.mean[1], w, l, yaw};
  }
};

/// Constant-velocity propagation over dt seconds with continuous
/// white-noise-acceleration process noise (two predicts of dt/2 compose to
/// one predict of dt).
Track predict(const Track& track, double dt_s, const TrackerConfig& cfg);

/// Kalman position update from a measured box; extents and yaw follow the
/// measurement by exponential smoothing.
Track correct(const Track& track, const Detection& measured, const TrackerConfig& cfg);

struct Association {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

/// One-to-one matching maximizing total IoU over pairs gated at
/// IoU >= gate_iou (and > 0). Optimal, not greedy; ties prefer lower track
/// ids, then earlier detections.
Association associate(const std::vector<Track>& predicted_tracks,
                      const std::vector<Detection>& detections, double gate_iou);

/// One tracking session: per-object filters, IoU association, lifecycle
/// policy, best-guess imputation of missed confirmed tracks. Frames must be
/// fed in strictly increasing timestamp order.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {});

  TrackedFrame update_frame(const DetectionFrame& frame);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::int64_t next_id_ = 1;
  std::int64_t last_timestamp_us_ = 0;
};

}  // namespace drivesense
