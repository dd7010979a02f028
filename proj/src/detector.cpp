#include "drivesense/detector.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "drivesense/geometry.hpp"
#include "drivesense/wire.hpp"

namespace drivesense {

Detection rotate_detection(const Detection& det, double angle_rad) {
  Detection out = det;
  if (angle_rad == M_PI || angle_rad == -M_PI) {
    // half-revolution is an exact negation
    out.box.cx = -det.box.cx;
    out.box.cy = -det.box.cy;
  } else {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    out.box.cx = c * det.box.cx - s * det.box.cy;
    out.box.cy = s * det.box.cx + c * det.box.cy;
  }
  out.box.yaw = normalize_angle(det.box.yaw + angle_rad);
  return out;
}

std::vector<Detection> consolidate(const std::vector<Detection>& front,
                                   const std::vector<Detection>& rear_rotated_back,
                                   double iou_thresh) {
  if (!(iou_thresh > 0.0) || !(iou_thresh < 1.0)) {
    throw ConfigError("consolidate: iou threshold must be in (0, 1)");
  }
  std::vector<Detection> pool = front;
  pool.insert(pool.end(), rear_rotated_back.begin(), rear_rotated_back.end());
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  std::vector<Detection> kept;
  for (const Detection& d : pool) {
    bool duplicate = false;
    for (const Detection& k : kept) {
      if (iou_oriented(d.box, k.box) >= iou_thresh) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(d);
  }
  return kept;
}

std::vector<Detection> detect(const BevMap& map, Detector& detector) {
  std::vector<Detection> dets;
  try {
    dets = detector.detect(map);
  } catch (const std::exception& e) {
    throw std::runtime_error("detector failed on frame '" + map.frame_id + "': " + e.what());
  }
  for (const Detection& d : dets) {
    if (!(d.box.w > 0.0) || !(d.box.l > 0.0)) {
      throw std::runtime_error("detector returned degenerate box on frame '" + map.frame_id + "'");
    }
  }
  return dets;
}

std::vector<Detection> detect_full_azimuth(const PointCloud& cloud, Detector& detector,
                                           const FullAzimuthConfig& cfg) {
  const BevMap map = make_frgb(cloud, cfg.grid);
  auto [front, rear] = split_halves(map, cfg.seam_margin_m);
  const std::vector<Detection> front_dets = detect(front, detector);
  std::vector<Detection> rear_dets = detect(rear, detector);
  for (Detection& d : rear_dets) d = rotate_detection(d, M_PI);
  return consolidate(front_dets, rear_dets, cfg.consolidation_iou);
}

// ---------------------------------------------------------------------------

void OracleDetector::set_truth(const std::string& frame_id, std::vector<Detection> dets) {
  truth_[frame_id] = std::move(dets);
}

void OracleDetector::load_truth_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const DetectionFrame f = detection_frame_from_json(json::parse(line));
    truth_[f.frame_id] = f.boxes;
  }
}

namespace {

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t oracle_stream_seed(std::uint64_t seed, const std::string& frame_id,
                                 MapOrigin origin) {
  std::uint64_t h = mix_hash(0x51ed2701a3c5e091ULL, seed);
  for (char c : frame_id) h = mix_hash(h, static_cast<unsigned char>(c));
  return mix_hash(h, static_cast<std::uint64_t>(origin) + 1);
}

}  // namespace

std::vector<Detection> OracleDetector::detect(const BevMap& map) {
  std::vector<Detection> out;
  const auto it = truth_.find(map.frame_id);
  const std::vector<Detection>* truth = it == truth_.end() ? nullptr : &it->second;

  std::mt19937_64 rng(oracle_stream_seed(config_.seed, map.frame_id, map.origin));
  std::normal_distribution<double> noise(0.0, config_.noise_sigma_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double ext = map.config.extent_m;
  auto inside = [&](double x, double y) {
    return x > map.x_min() && x <= map.x_max() && y >= -ext && y <= ext;
  };

  if (truth) {
    for (const Detection& t : *truth) {
      // Presented frame of the queried map.
      const Detection d = map.view_rotation_rad != 0.0
                              ? rotate_detection(t, map.view_rotation_rad)
                              : t;
      if (!inside(d.box.cx, d.box.cy)) continue;
      if (config_.false_negative_rate > 0.0 && unit(rng) < config_.false_negative_rate) {
        continue;
      }
      Detection noisy = d;
      if (config_.noise_sigma_m > 0.0) {
        noisy.box.cx += noise(rng);
        noisy.box.cy += noise(rng);
      }
      out.push_back(noisy);
    }
  }
  for (int slot = 0; slot < config_.false_positive_slots; ++slot) {
    if (unit(rng) < config_.false_positive_rate) {
      Detection fp;
      fp.box.cx = map.x_min() + unit(rng) * (map.x_max() - map.x_min());
      fp.box.cy = -ext + unit(rng) * 2.0 * ext;
      fp.box.w = 1.8;
      fp.box.l = 4.5;
      fp.box.yaw = normalize_angle(unit(rng) * 2.0 * M_PI);
      fp.score = 0.5;
      out.push_back(fp);
    }
  }
  return out;
}

std::vector<Detection> FailingDetector::detect(const BevMap& map) {
  throw std::runtime_error("detector backend unavailable (frame '" + map.frame_id + "')");
}

}  // namespace drivesense
