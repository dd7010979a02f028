#include "drivesense/tracking.hpp"

#include <algorithm>

#include "drivesense/assignment.hpp"
#include "drivesense/geometry.hpp"

namespace drivesense {

void TrackerConfig::validate() const {
  if (confirm_hits < 1) throw ConfigError("tracker: confirm_hits must be >= 1");
  if (max_misses < 1) throw ConfigError("tracker: max_misses must be >= 1");
  if (gate_iou < 0.0 || gate_iou >= 1.0) throw ConfigError("tracker: gate_iou must be in [0, 1)");
  if (!(process_noise_accel_sigma > 0.0)) throw ConfigError("tracker: process noise must be > 0");
  if (!(meas_noise_sigma > 0.0)) throw ConfigError("tracker: measurement noise must be > 0");
  if (extents_smoothing_alpha < 0.0 || extents_smoothing_alpha > 1.0) {
    throw ConfigError("tracker: extents_smoothing_alpha must be in [0, 1]");
  }
}

Track predict(const Track& track, double dt_s, const TrackerConfig& cfg) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("predict: dt must be > 0");
  Track out = track;
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt_s;
  f(1, 3) = dt_s;

  const double q = cfg.process_noise_accel_sigma * cfg.process_noise_accel_sigma;
  const double dt2 = dt_s * dt_s;
  const double dt3 = dt2 * dt_s;
  Eigen::Matrix4d noise = Eigen::Matrix4d::Zero();
  noise(0, 0) = noise(1, 1) = q * dt3 / 3.0;
  noise(0, 2) = noise(2, 0) = q * dt2 / 2.0;
  noise(1, 3) = noise(3, 1) = q * dt2 / 2.0;
  noise(2, 2) = noise(3, 3) = q * dt_s;

  out.state.mean = f * track.state.mean;
  out.state.covariance = f * track.state.covariance * f.transpose() + noise;
  out.state.covariance = 0.5 * (out.state.covariance + out.state.covariance.transpose()).eval();
  return out;
}

Track correct(const Track& track, const Detection& measured, const TrackerConfig& cfg) {
  Track out = track;
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d r =
      cfg.meas_noise_sigma * cfg.meas_noise_sigma * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d z(measured.box.cx, measured.box.cy);

  const Eigen::Matrix2d s = h * track.state.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 4, 2> k = track.state.covariance * h.transpose() * s.inverse();
  out.state.mean = track.state.mean + k * (z - h * track.state.mean);
  // Joseph form keeps the covariance symmetric PSD.
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
  out.state.covariance =
      ikh * track.state.covariance * ikh.transpose() + k * r * k.transpose();
  out.state.covariance = 0.5 * (out.state.covariance + out.state.covariance.transpose()).eval();

  const double a = cfg.extents_smoothing_alpha;
  out.w = (1.0 - a) * track.w + a * measured.box.w;
  out.l = (1.0 - a) * track.l + a * measured.box.l;
  out.yaw = normalize_angle(track.yaw + a * normalize_angle(measured.box.yaw - track.yaw));
  out.cls = measured.cls;
  out.score = measured.score;
  return out;
}

Association associate(const std::vector<Track>& predicted_tracks,
                      const std::vector<Detection>& detections, double gate_iou) {
  const int n = static_cast<int>(predicted_tracks.size());
  const int m = static_cast<int>(detections.size());
  Association out;
  std::vector<double> weights(static_cast<size_t>(n) * m, -1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double iou = iou_oriented(predicted_tracks[i].box(), detections[j].box);
      if (iou >= gate_iou && iou > 0.0) weights[static_cast<size_t>(i) * m + j] = iou;
    }
  }
  const std::vector<int> match = solve_assignment(weights, n, m);
  std::vector<char> det_used(m, 0);
  for (int i = 0; i < n; ++i) {
    if (match[i] >= 0) {
      out.matches.emplace_back(i, match[i]);
      det_used[match[i]] = 1;
    } else {
      out.unmatched_tracks.push_back(i);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (!det_used[j]) out.unmatched_detections.push_back(j);
  }
  return out;
}

Tracker::Tracker(TrackerConfig cfg) : config_(cfg) { config_.validate(); }

TrackedFrame Tracker::update_frame(const DetectionFrame& frame) {
  if (frame.timestamp_us <= last_timestamp_us_) {
    throw OrderingError("update_frame: timestamp " + std::to_string(frame.timestamp_us) +
                        " not after " + std::to_string(last_timestamp_us_));
  }

  if (last_timestamp_us_ > 0) {
    const double dt = (frame.timestamp_us - last_timestamp_us_) * 1e-6;
    for (Track& t : tracks_) t = predict(t, dt, config_);
  }
  last_timestamp_us_ = frame.timestamp_us;

  const Association assoc = associate(tracks_, frame.boxes, config_.gate_iou);

  for (const auto& [ti, di] : assoc.matches) {
    Track& t = tracks_[ti];
    t = correct(t, frame.boxes[di], config_);
    t.hit_streak += 1;
    t.miss_streak = 0;
    t.last_update_us = frame.timestamp_us;
    if (t.status == TrackStatus::tentative && t.hit_streak >= config_.confirm_hits) {
      t.status = TrackStatus::confirmed;
    }
  }
  for (int ti : assoc.unmatched_tracks) {
    Track& t = tracks_[ti];
    t.miss_streak += 1;
    t.hit_streak = 0;  // confirmation requires consecutive hits
    if (t.miss_streak > config_.max_misses) t.status = TrackStatus::dead;
  }
  for (int di : assoc.unmatched_detections) {
    const Detection& d = frame.boxes[di];
    Track t;
    t.id = next_id_++;
    t.state.mean << d.box.cx, d.box.cy, 0.0, 0.0;
    t.state.covariance = Eigen::Matrix4d::Zero();
    t.state.covariance(0, 0) = t.state.covariance(1, 1) =
        config_.meas_noise_sigma * config_.meas_noise_sigma;
    t.state.covariance(2, 2) = t.state.covariance(3, 3) = config_.init_velocity_var;
    t.w = d.box.w;
    t.l = d.box.l;
    t.yaw = d.box.yaw;
    t.cls = d.cls;
    t.score = d.score;
    t.hit_streak = 1;
    t.status = t.hit_streak >= config_.confirm_hits ? TrackStatus::confirmed
                                                    : TrackStatus::tentative;
    t.last_update_us = frame.timestamp_us;
    tracks_.push_back(std::move(t));
  }

  tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                               [](const Track& t) { return t.status == TrackStatus::dead; }),
                tracks_.end());

  TrackedFrame out;
  out.frame_id = frame.frame_id;
  out.timestamp_us = frame.timestamp_us;
  for (const Track& t : tracks_) {
    if (t.status != TrackStatus::confirmed) continue;
    TrackedBox b;
    b.box = t.box();
    b.cls = t.cls;
    b.score = t.score;
    b.id = t.id;
    b.vx = t.state.mean[2];
    b.vy = t.state.mean[3];
    b.status = t.status;
    out.boxes.push_back(b);
  }
  std::sort(out.boxes.begin(), out.boxes.end(),
            [](const TrackedBox& a, const TrackedBox& b) { return a.id < b.id; });
  return out;
}

}  // namespace drivesense
