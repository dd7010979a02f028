#pragma once

#include "drivesense/config.hpp"
#include "drivesense/detector.hpp"
#include "drivesense/filtering.hpp"
#include "drivesense/idm.hpp"
#include "drivesense/scene.hpp"
#include "drivesense/signal.hpp"
#include "drivesense/tracking.hpp"
#include "drivesense/wire.hpp"

namespace drivesense {

/// A pipeline stage failed on a specific frame.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& frame_id, const std::string& msg)
      : std::runtime_error("stage '" + stage + "' failed at frame '" + frame_id +
                           "': " + msg),
        stage(stage),
        frame_id(frame_id) {}
  std::string stage;
  std::string frame_id;
};

enum class DetectorKind { oracle, remote };

struct PipelineConfig {
  GridConfig grid;
  TrackerConfig tracker;
  LaneConfig lanes;
  IdmBounds idm_bounds;
  FitConfig fit;
  double idm_window_s = 10.0;
  double idm_stride_s = 5.0;

  DetectorKind detector_kind = DetectorKind::oracle;
  OracleConfig oracle;
  std::string remote_endpoint;

  bool use_http_tracker = false;
  std::string mots_endpoint;

  bool ground_removal = false;
  GroundRemovalConfig ground;
  bool clustering = false;
  double cluster_eps_m = 0.5;
  int cluster_min_size = 5;

  double consolidation_iou = 0.3;
  double seam_margin_m = 0.0;
  int detect_workers = 2;

  double ego_length = 4.5;
  bool correlate = true;
  double pcc_grid_hz = 2.0;

  std::string frames_manifest;    // frames.csv (frame_id,timestamp_us,path)
  std::string dynamics_path;
  std::string physiology_path;    // required when correlate
  std::string truth_tracks_path;  // optional; enables tracking/IDM evaluation
  std::string truth_params_path;  // optional; IDM truth for evaluation
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

/// Reads a pipeline config document plus command-line overrides.
PipelineConfig pipeline_config_from(const KeyValueConfig& kv);

struct DroppedFrame {
  std::string frame_id;
  std::string reason;
};

struct TrackingEval {
  double position_rmse_m = 0.0;
  int matched_boxes = 0;
  int emitted_boxes = 0;
  int truth_boxes = 0;
};

struct IdmEval {
  IdmParams truth;
  IdmParams estimate;
  double max_rel_error = 0.0;  // worst over the five parameters
};

struct RunReport {
  int frames_processed = 0;
  std::vector<DroppedFrame> dropped;
  int follow_samples = 0;
  ParamSeries params;
  bool has_global_fit = false;
  FitResult global_fit;
  std::vector<std::pair<std::string, double>> correlations;  // parameter -> r
  std::vector<std::string> correlation_notes;
  bool has_tracking_eval = false;
  TrackingEval tracking_eval;
  bool has_idm_eval = false;
  IdmEval idm_eval;

  json to_json() const;
};

/// Runs the full chain over recorded frames: point-cloud load, optional
/// ground removal and clustering, full-azimuth detection, tracking, scene
/// summaries, sliding IDM estimation on the ego-lane leader, and correlation
/// against the physiology series. Writes artifacts under config.out_dir and
/// returns the report. Throws ConfigError before any processing for input
/// problems and StageError for per-frame failures.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace drivesense
