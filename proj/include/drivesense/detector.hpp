#pragma once

#include <map>
#include <memory>

#include "drivesense/bev.hpp"

namespace drivesense {

/// Object detection over BEV maps. Implementations return detections in
/// meters in the map's presented frame and must be deterministic for a fixed
/// seed. detect() may be called from multiple threads unless thread_safe()
/// returns false, in which case callers serialize access.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const BevMap& map) = 0;
  virtual bool thread_safe() const { return true; }
};

/// (cx, cy) -> (-cx, -cy), yaw -> yaw + pi. Extents, class, score unchanged.
Detection rotate_detection(const Detection& det, double angle_rad = M_PI);

/// Duplicate suppression across the two half-map passes: the union of both
/// sets, sorted by descending score, where any box overlapping an already
/// kept one with IoU >= iou_thresh is merged into it (higher score wins).
std::vector<Detection> consolidate(const std::vector<Detection>& front,
                                   const std::vector<Detection>& rear_rotated_back,
                                   double iou_thresh);

struct FullAzimuthConfig {
  GridConfig grid;
  double consolidation_iou = 0.3;
  double seam_margin_m = 0.0;
};

/// 2-step full-azimuthal detection: rasterize, split into forward and rotated
/// rear halves, detect on each, rotate the rear detections back by pi, and
/// consolidate into one 360-degree set.
std::vector<Detection> detect_full_azimuth(const PointCloud& cloud,
                                           Detector& detector,
                                           const FullAzimuthConfig& cfg);

/// Runs the detector on a single map and validates its output. Detector
/// exceptions are rethrown with the frame id attached.
std::vector<Detection> detect(const BevMap& map, Detector& detector);

// ---------------------------------------------------------------------------

struct OracleConfig {
  double noise_sigma_m = 0.0;       // Gaussian noise on box centers
  double false_negative_rate = 0.0; // per-object drop probability
  double false_positive_rate = 0.0; // per-slot spurious-box probability
  int false_positive_slots = 0;
  std::uint64_t seed = 0;
};

/// Test detector driven by fixture ground truth: emits the truth boxes whose
/// centers fall inside the queried map, expressed in the map's presented
/// frame, with optional center noise, dropouts, and spurious boxes. The noise
/// stream is keyed on (seed, frame_id, origin), so repeated calls with the
/// same map are identical.
class OracleDetector : public Detector {
 public:
  OracleDetector() = default;
  explicit OracleDetector(OracleConfig config) : config_(config) {}

  void set_truth(const std::string& frame_id, std::vector<Detection> dets);
  void load_truth_jsonl(std::string_view text);

  std::vector<Detection> detect(const BevMap& map) override;

 private:
  OracleConfig config_;
  std::map<std::string, std::vector<Detection>> truth_;
};

/// Detector that always throws; exercises the service error path.
class FailingDetector : public Detector {
 public:
  std::vector<Detection> detect(const BevMap& map) override;
};

}  // namespace drivesense
