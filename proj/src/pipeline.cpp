#include "drivesense/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "drivesense/pointcloud.hpp"
#include "drivesense/services.hpp"

namespace drivesense {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ManifestRow {
  std::string frame_id;
  std::int64_t timestamp_us;
  std::string path;
};

std::vector<ManifestRow> parse_manifest(const std::string& manifest_path) {
  const std::string text = read_file(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();
  std::istringstream in(text);
  std::string line;
  std::vector<ManifestRow> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "frame_id,timestamp_us,path") {
        throw ConfigError("frames manifest: expected header frame_id,timestamp_us,path");
      }
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ConfigError("frames manifest line " + std::to_string(line_no) + ": expected 3 fields");
    }
    ManifestRow row;
    row.frame_id = line.substr(0, c1);
    row.timestamp_us = std::stoll(line.substr(c1 + 1, c2 - c1 - 1));
    row.path = (base / line.substr(c2 + 1)).string();
    rows.push_back(std::move(row));
  }
  return rows;
}

// Observed ego acceleration: the dynamics column when present, otherwise
// central differences of speed smoothed by a zero-phase single-pole low-pass
// at 1 Hz.
SignalSeries accel_signal(const std::vector<EgoSample>& dynamics) {
  SignalSeries out;
  if (dynamics.size() < 3) {
    for (const EgoSample& s : dynamics) {
      out.timestamps_us.push_back(s.timestamp_us);
      out.values.push_back(s.accel.value_or(0.0));
    }
    return out;
  }
  if (dynamics_have_accel(dynamics)) {
    for (const EgoSample& s : dynamics) {
      out.timestamps_us.push_back(s.timestamp_us);
      out.values.push_back(*s.accel);
    }
    return out;
  }
  const size_t n = dynamics.size();
  std::vector<double> accel(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double dt = (dynamics[i + 1].timestamp_us - dynamics[i - 1].timestamp_us) * 1e-6;
    if (dt > 0.0) accel[i] = (dynamics[i + 1].speed - dynamics[i - 1].speed) / dt;
  }
  accel[0] = accel[1];
  accel[n - 1] = accel[n - 2];

  const double mean_dt =
      (dynamics.back().timestamp_us - dynamics.front().timestamp_us) * 1e-6 /
      static_cast<double>(n - 1);
  const double fc = 1.0;
  const double alpha = std::clamp(2.0 * M_PI * fc * mean_dt /
                                      (1.0 + 2.0 * M_PI * fc * mean_dt),
                                  0.0, 1.0);
  std::vector<double> smooth = accel;
  for (size_t i = 1; i < n; ++i) smooth[i] = smooth[i - 1] + alpha * (smooth[i] - smooth[i - 1]);
  for (size_t i = n - 1; i-- > 0;) smooth[i] = smooth[i + 1] + alpha * (smooth[i] - smooth[i + 1]);

  for (size_t i = 0; i < n; ++i) {
    out.timestamps_us.push_back(dynamics[i].timestamp_us);
    out.values.push_back(smooth[i]);
  }
  return out;
}

json lane_summary_json(std::int64_t t_us, const char* lane, const LaneSummary& s) {
  auto side = [](const std::optional<LaneNeighbor>& n) -> json {
    if (!n) return nullptr;
    return json{{"id", n->track_id}, {"gap", n->gap_m}, {"rel_speed", n->rel_speed}};
  };
  return json{{"timestamp_us", t_us},
              {"lane", lane},
              {"leader", side(s.leader)},
              {"follower", side(s.follower)}};
}

std::map<std::string, TrackedFrame> load_truth_tracks(const std::string& path) {
  std::map<std::string, TrackedFrame> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    TrackedFrame f = tracked_frame_from_json(json::parse(line));
    out[f.frame_id] = std::move(f);
  }
  return out;
}

}  // namespace

PipelineConfig pipeline_config_from(const KeyValueConfig& kv) {
  PipelineConfig c;
  c.grid.extent_m = kv.get_double("grid.extent_m", c.grid.extent_m);
  c.grid.cells_per_side = static_cast<int>(kv.get_int("grid.cells_per_side", c.grid.cells_per_side));
  c.grid.z_min = kv.get_double("grid.z_min", c.grid.z_min);
  c.grid.z_max = kv.get_double("grid.z_max", c.grid.z_max);

  c.tracker.confirm_hits = static_cast<int>(kv.get_int("tracker.confirm_hits", c.tracker.confirm_hits));
  c.tracker.max_misses = static_cast<int>(kv.get_int("tracker.max_misses", c.tracker.max_misses));
  c.tracker.gate_iou = kv.get_double("tracker.gate_iou", c.tracker.gate_iou);
  c.tracker.process_noise_accel_sigma =
      kv.get_double("tracker.process_noise_accel_sigma", c.tracker.process_noise_accel_sigma);
  c.tracker.meas_noise_sigma = kv.get_double("tracker.meas_noise_sigma", c.tracker.meas_noise_sigma);
  c.tracker.extents_smoothing_alpha =
      kv.get_double("tracker.extents_smoothing_alpha", c.tracker.extents_smoothing_alpha);

  c.lanes.lane_width = kv.get_double("lanes.lane_width", c.lanes.lane_width);
  c.lanes.num_side_lanes = static_cast<int>(kv.get_int("lanes.num_side_lanes", c.lanes.num_side_lanes));

  c.idm_bounds.s0_min = kv.get_double("idm.s0_min", c.idm_bounds.s0_min);
  c.idm_bounds.s0_max = kv.get_double("idm.s0_max", c.idm_bounds.s0_max);
  c.idm_bounds.v0_min = kv.get_double("idm.v0_min", c.idm_bounds.v0_min);
  c.idm_bounds.v0_max = kv.get_double("idm.v0_max", c.idm_bounds.v0_max);
  c.idm_bounds.T_min = kv.get_double("idm.T_min", c.idm_bounds.T_min);
  c.idm_bounds.T_max = kv.get_double("idm.T_max", c.idm_bounds.T_max);
  c.idm_bounds.a_min = kv.get_double("idm.a_min", c.idm_bounds.a_min);
  c.idm_bounds.a_max = kv.get_double("idm.a_max", c.idm_bounds.a_max);
  c.idm_bounds.b_min = kv.get_double("idm.b_min", c.idm_bounds.b_min);
  c.idm_bounds.b_max = kv.get_double("idm.b_max", c.idm_bounds.b_max);
  c.idm_window_s = kv.get_double("idm.window_s", c.idm_window_s);
  c.idm_stride_s = kv.get_double("idm.stride_s", c.idm_stride_s);
  c.fit.min_samples = static_cast<int>(kv.get_int("idm.min_samples", c.fit.min_samples));
  c.fit.multistarts = static_cast<int>(kv.get_int("idm.multistarts", c.fit.multistarts));

  const std::string det = kv.get_string("detector.kind", "oracle");
  if (det == "oracle") c.detector_kind = DetectorKind::oracle;
  else if (det == "remote") c.detector_kind = DetectorKind::remote;
  else throw ConfigError("detector.kind must be 'oracle' or 'remote'");
  c.remote_endpoint = kv.get_string("detector.endpoint", "");
  c.oracle.noise_sigma_m = kv.get_double("detector.noise_sigma_m", 0.0);
  c.oracle.false_negative_rate = kv.get_double("detector.false_negative_rate", 0.0);
  c.oracle.false_positive_rate = kv.get_double("detector.false_positive_rate", 0.0);
  c.oracle.false_positive_slots =
      static_cast<int>(kv.get_int("detector.false_positive_slots", 0));

  c.use_http_tracker = kv.get_bool("tracker.http", false);
  c.mots_endpoint = kv.get_string("tracker.endpoint", "");

  c.ground_removal = kv.get_bool("stages.ground_removal", c.ground_removal);
  c.clustering = kv.get_bool("stages.clustering", c.clustering);
  c.cluster_eps_m = kv.get_double("stages.cluster_eps_m", c.cluster_eps_m);
  c.cluster_min_size = static_cast<int>(kv.get_int("stages.cluster_min_size", c.cluster_min_size));

  c.consolidation_iou = kv.get_double("pipeline.consolidation_iou", c.consolidation_iou);
  c.seam_margin_m = kv.get_double("pipeline.seam_margin_m", c.seam_margin_m);
  c.detect_workers = static_cast<int>(kv.get_int("pipeline.detect_workers", c.detect_workers));
  c.ego_length = kv.get_double("pipeline.ego_length", c.ego_length);
  c.correlate = kv.get_bool("pipeline.correlate", c.correlate);
  c.pcc_grid_hz = kv.get_double("pipeline.pcc_grid_hz", c.pcc_grid_hz);

  c.frames_manifest = kv.get_string("io.frames", "");
  c.dynamics_path = kv.get_string("io.dynamics", "");
  c.physiology_path = kv.get_string("io.physiology", "");
  c.truth_tracks_path = kv.get_string("io.truth_tracks", "");
  c.truth_params_path = kv.get_string("io.truth_params", "");
  c.out_dir = kv.get_string("io.out_dir", c.out_dir);
  c.seed = static_cast<std::uint64_t>(kv.get_int("pipeline.seed", 1));
  return c;
}

json RunReport::to_json() const {
  json j;
  j["frames_processed"] = frames_processed;
  j["frames_dropped"] = dropped.size();
  json dropped_j = json::array();
  for (const DroppedFrame& d : dropped) {
    dropped_j.push_back({{"frame_id", d.frame_id}, {"reason", d.reason}});
  }
  j["dropped"] = std::move(dropped_j);
  j["follow_samples"] = follow_samples;

  json windows = json::array();
  for (const ParamWindow& w : params.windows) {
    windows.push_back({{"t_center_us", w.t_center_us},
                       {"s0", w.params.s0},
                       {"v0", w.params.v0},
                       {"T", w.params.T},
                       {"a", w.params.a},
                       {"b", w.params.b},
                       {"sse", w.sse},
                       {"samples", w.sample_count},
                       {"low_excitation", w.flags.low_excitation},
                       {"no_improvement", w.flags.no_improvement}});
  }
  j["estimation_windows"] = std::move(windows);
  json skipped = json::array();
  for (const SkippedWindow& s : params.skipped) {
    skipped.push_back({{"t_center_us", s.t_center_us}, {"samples", s.sample_count}});
  }
  j["skipped_windows"] = std::move(skipped);

  if (has_global_fit) {
    j["global_fit"] = {{"s0", global_fit.params.s0}, {"v0", global_fit.params.v0},
                       {"T", global_fit.params.T},   {"a", global_fit.params.a},
                       {"b", global_fit.params.b},   {"sse", global_fit.sse}};
  }
  json corr = json::object();
  for (const auto& [name, r] : correlations) corr[name] = r;
  j["correlations"] = std::move(corr);
  j["correlation_notes"] = correlation_notes;

  if (has_tracking_eval) {
    j["tracking_eval"] = {{"position_rmse_m", tracking_eval.position_rmse_m},
                          {"matched_boxes", tracking_eval.matched_boxes},
                          {"emitted_boxes", tracking_eval.emitted_boxes},
                          {"truth_boxes", tracking_eval.truth_boxes}};
  }
  if (has_idm_eval) {
    j["idm_eval"] = {{"truth",
                      {{"s0", idm_eval.truth.s0},
                       {"v0", idm_eval.truth.v0},
                       {"T", idm_eval.truth.T},
                       {"a", idm_eval.truth.a},
                       {"b", idm_eval.truth.b}}},
                     {"estimate",
                      {{"s0", idm_eval.estimate.s0},
                       {"v0", idm_eval.estimate.v0},
                       {"T", idm_eval.estimate.T},
                       {"a", idm_eval.estimate.a},
                       {"b", idm_eval.estimate.b}}},
                     {"max_rel_error", idm_eval.max_rel_error}};
  }
  return j;
}

RunReport run_pipeline(const PipelineConfig& config) {
  config.grid.validate();
  config.tracker.validate();
  config.idm_bounds.validate();

  // Validate every referenced input before touching any frame.
  if (config.frames_manifest.empty()) throw ConfigError("pipeline: io.frames is required");
  if (!fs::exists(config.frames_manifest)) {
    throw ConfigError("pipeline: frames manifest not found: " + config.frames_manifest);
  }
  if (config.dynamics_path.empty()) throw ConfigError("pipeline: io.dynamics is required");
  if (!fs::exists(config.dynamics_path)) {
    throw ConfigError("pipeline: dynamics file not found: " + config.dynamics_path);
  }
  if (config.correlate) {
    if (config.physiology_path.empty()) {
      throw ConfigError("pipeline: correlation enabled but io.physiology is missing");
    }
    if (!fs::exists(config.physiology_path)) {
      throw ConfigError("pipeline: physiology file not found: " + config.physiology_path);
    }
  }
  if (config.detector_kind == DetectorKind::oracle) {
    if (config.truth_tracks_path.empty()) {
      throw ConfigError("pipeline: oracle detector needs io.truth_tracks");
    }
    if (!fs::exists(config.truth_tracks_path)) {
      throw ConfigError("pipeline: truth tracks file not found: " + config.truth_tracks_path);
    }
  } else if (config.remote_endpoint.empty()) {
    throw ConfigError("pipeline: remote detector needs detector.endpoint");
  }
  if (!config.truth_tracks_path.empty() && !fs::exists(config.truth_tracks_path)) {
    throw ConfigError("pipeline: truth tracks file not found: " + config.truth_tracks_path);
  }
  if (!config.truth_params_path.empty() && !fs::exists(config.truth_params_path)) {
    throw ConfigError("pipeline: truth params file not found: " + config.truth_params_path);
  }

  const std::vector<ManifestRow> manifest = parse_manifest(config.frames_manifest);
  const std::vector<EgoSample> dynamics = parse_dynamics(read_file(config.dynamics_path));
  if (dynamics.empty()) throw ConfigError("pipeline: dynamics file has no samples");
  const SignalSeries accel = accel_signal(dynamics);

  SignalSeries physiology;
  if (config.correlate) physiology = parse_signal_csv(read_file(config.physiology_path));

  std::shared_ptr<Detector> detector;
  OracleConfig oracle_cfg = config.oracle;
  oracle_cfg.seed = oracle_cfg.seed == 0 ? config.seed : oracle_cfg.seed;
  if (config.detector_kind == DetectorKind::oracle) {
    auto oracle = std::make_shared<OracleDetector>(oracle_cfg);
    oracle->load_truth_jsonl(read_file(config.truth_tracks_path));
    detector = oracle;
  } else {
    detector = std::make_shared<RemoteDetector>(config.remote_endpoint);
  }

  std::unique_ptr<Tracker> local_tracker;
  std::unique_ptr<MotsClient> remote_tracker;
  std::string session_id;
  if (config.use_http_tracker) {
    if (config.mots_endpoint.empty()) throw ConfigError("pipeline: tracker.endpoint is required");
    remote_tracker = std::make_unique<MotsClient>(config.mots_endpoint);
    session_id = remote_tracker->create_session(config.tracker);
  } else {
    local_tracker = std::make_unique<Tracker>(config.tracker);
  }

  fs::create_directories(config.out_dir);
  std::ofstream tracked_out(fs::path(config.out_dir) / "tracked.jsonl");
  std::ofstream scene_out(fs::path(config.out_dir) / "scene.jsonl");
  std::ofstream clusters_out;
  if (config.clustering) {
    clusters_out.open(fs::path(config.out_dir) / "clusters.csv");
    clusters_out << "frame_id,cluster_count\n";
  }

  std::map<std::string, TrackedFrame> truth_tracks;
  if (!config.truth_tracks_path.empty()) {
    truth_tracks = load_truth_tracks(config.truth_tracks_path);
  }

  RunReport report;
  std::vector<FollowSample> follow;
  double err_sq_sum = 0.0;
  int err_count = 0;
  int truth_box_count = 0;
  int emitted_count = 0;

  FullAzimuthConfig fa;
  fa.grid = config.grid;
  fa.consolidation_iou = config.consolidation_iou;
  fa.seam_margin_m = config.seam_margin_m;

  // Detection fans out across frames (the detectors are stateless); results
  // are consumed strictly in frame order by the tracker stage.
  struct FrameResult {
    std::vector<Detection> detections;
    int cluster_count = -1;
  };
  auto detect_frame = [&](const ManifestRow& row) -> FrameResult {
    PointCloud cloud;
    try {
      cloud = parse_cloud_csv(read_file(row.path), row.frame_id, row.timestamp_us);
    } catch (const std::exception& e) {
      throw StageError("load", row.frame_id, e.what());
    }
    try {
      if (config.ground_removal) {
        GroundRemovalConfig g = config.ground;
        g.seed = config.seed;
        cloud = remove_ground(cloud, g).cloud;
      }
    } catch (const std::exception& e) {
      throw StageError("ground_removal", row.frame_id, e.what());
    }
    FrameResult result;
    if (config.clustering) {
      try {
        result.cluster_count = static_cast<int>(
            cluster(cloud, config.cluster_eps_m, config.cluster_min_size).size());
      } catch (const std::exception& e) {
        throw StageError("clustering", row.frame_id, e.what());
      }
    }
    try {
      result.detections = detect_full_azimuth(cloud, *detector, fa);
    } catch (const std::exception& e) {
      throw StageError("detection", row.frame_id, e.what());
    }
    return result;
  };

  const int workers = std::max(1, config.detect_workers);
  std::vector<std::future<FrameResult>> inflight;
  size_t next_submit = 0;
  auto submit = [&] {
    while (next_submit < manifest.size() &&
           inflight.size() < static_cast<size_t>(workers)) {
      const ManifestRow& row = manifest[next_submit++];
      if (workers == 1 || !detector->thread_safe()) {
        std::promise<FrameResult> p;
        try {
          p.set_value(detect_frame(row));
        } catch (...) {
          p.set_exception(std::current_exception());
        }
        inflight.push_back(p.get_future());
      } else {
        inflight.push_back(std::async(std::launch::async, detect_frame, row));
      }
    }
  };

  std::int64_t prev_ts = 0;
  submit();
  for (size_t k = 0; k < manifest.size(); ++k) {
    const ManifestRow& row = manifest[k];
    FrameResult frame_result = inflight.front().get();
    inflight.erase(inflight.begin());
    submit();

    if (row.timestamp_us <= prev_ts) {
      report.dropped.push_back({row.frame_id, "non-monotonic timestamp"});
      continue;
    }
    prev_ts = row.timestamp_us;

    if (config.clustering) {
      clusters_out << row.frame_id << "," << frame_result.cluster_count << "\n";
    }

    DetectionFrame det_frame;
    det_frame.frame_id = row.frame_id;
    det_frame.timestamp_us = row.timestamp_us;
    det_frame.boxes = std::move(frame_result.detections);

    TrackedFrame tracked;
    try {
      tracked = remote_tracker ? remote_tracker->post_frame(session_id, det_frame)
                               : local_tracker->update_frame(det_frame);
    } catch (const std::exception& e) {
      throw StageError("tracking", row.frame_id, e.what());
    }
    tracked_out << tracked_frame_to_json(tracked).dump() << "\n";

    double ego_speed = 0.0;
    bool have_speed = false;
    try {
      ego_speed = ego_speed_at(dynamics, row.timestamp_us);
      have_speed = true;
    } catch (const std::out_of_range&) {
      // frame outside the dynamics span: scene gaps still emitted, no follow sample
    }
    const SceneSummary scene = summarize_scene(tracked.boxes, config.lanes,
                                               ego_speed, config.ego_length,
                                               row.timestamp_us);
    scene_out << lane_summary_json(row.timestamp_us, "left", scene.left).dump() << "\n";
    scene_out << lane_summary_json(row.timestamp_us, "ego", scene.ego).dump() << "\n";
    scene_out << lane_summary_json(row.timestamp_us, "right", scene.right).dump() << "\n";

    if (scene.ego.leader && have_speed) {
      FollowSample s;
      s.timestamp_us = row.timestamp_us;
      s.v = ego_speed;
      s.s = scene.ego.leader->gap_m;
      s.dv = scene.ego.leader->rel_speed;
      try {
        s.a_obs = accel.at(row.timestamp_us);
      } catch (const std::out_of_range&) {
        s.a_obs = 0.0;
      }
      follow.push_back(s);
    }

    // Tracking evaluation against ground truth (nearest-center matching).
    const auto truth_it = truth_tracks.find(row.frame_id);
    if (truth_it != truth_tracks.end()) {
      truth_box_count += static_cast<int>(truth_it->second.boxes.size());
      emitted_count += static_cast<int>(tracked.boxes.size());
      for (const TrackedBox& tb : tracked.boxes) {
        double best = std::numeric_limits<double>::infinity();
        for (const TrackedBox& gt : truth_it->second.boxes) {
          const double dx = tb.box.cx - gt.box.cx;
          const double dy = tb.box.cy - gt.box.cy;
          best = std::min(best, dx * dx + dy * dy);
        }
        if (best < 2.0 * 2.0) {
          err_sq_sum += best;
          ++err_count;
        }
      }
    }
    ++report.frames_processed;
  }

  if (remote_tracker) remote_tracker->close_session(session_id);

  report.follow_samples = static_cast<int>(follow.size());
  {
    std::ofstream f(fs::path(config.out_dir) / "follow.csv");
    f << follow_to_csv(follow);
  }

  report.params = sliding_estimation(follow, config.idm_window_s, config.idm_stride_s,
                                     config.idm_bounds, config.fit);
  {
    std::ofstream f(fs::path(config.out_dir) / "params.csv");
    f << param_series_to_csv(report.params);
  }
  if (static_cast<int>(follow.size()) >= config.fit.min_samples) {
    report.global_fit = fit_idm(follow, config.idm_bounds, config.fit);
    report.has_global_fit = true;
  }

  if (config.correlate && !report.params.windows.empty()) {
    SignalSeries param_series[5];
    const char* names[5] = {"s0", "v0", "T", "a", "b"};
    for (const ParamWindow& w : report.params.windows) {
      const double vals[5] = {w.params.s0, w.params.v0, w.params.T, w.params.a, w.params.b};
      for (int i = 0; i < 5; ++i) {
        param_series[i].timestamps_us.push_back(w.t_center_us);
        param_series[i].values.push_back(vals[i]);
      }
    }
    std::ofstream corr_out(fs::path(config.out_dir) / "correlation.txt");
    for (int i = 0; i < 5; ++i) {
      try {
        const double r = pearson(param_series[i], physiology,
                                 param_series[i].t_min(), param_series[i].t_max(),
                                 config.pcc_grid_hz);
        report.correlations.emplace_back(names[i], r);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s=%.9g\n", names[i], r);
        corr_out << buf;
      } catch (const std::exception& e) {
        report.correlation_notes.push_back(std::string(names[i]) + ": " + e.what());
        corr_out << names[i] << "=undefined\n";
      }
    }
  } else if (config.correlate) {
    report.correlation_notes.push_back("no estimation windows; correlation skipped");
  }

  if (!truth_tracks.empty()) {
    report.has_tracking_eval = true;
    report.tracking_eval.position_rmse_m =
        err_count > 0 ? std::sqrt(err_sq_sum / err_count) : 0.0;
    report.tracking_eval.matched_boxes = err_count;
    report.tracking_eval.emitted_boxes = emitted_count;
    report.tracking_eval.truth_boxes = truth_box_count;
  }

  if (!config.truth_params_path.empty() && report.has_global_fit) {
    const KeyValueConfig truth_kv = KeyValueConfig::parse_file(config.truth_params_path);
    IdmEval eval;
    eval.truth.s0 = truth_kv.require_double("s0");
    eval.truth.v0 = truth_kv.require_double("v0");
    eval.truth.T = truth_kv.require_double("T");
    eval.truth.a = truth_kv.require_double("a");
    eval.truth.b = truth_kv.require_double("b");
    eval.estimate = report.global_fit.params;
    const double rel[5] = {
        std::abs(eval.estimate.s0 - eval.truth.s0) / eval.truth.s0,
        std::abs(eval.estimate.v0 - eval.truth.v0) / eval.truth.v0,
        std::abs(eval.estimate.T - eval.truth.T) / eval.truth.T,
        std::abs(eval.estimate.a - eval.truth.a) / eval.truth.a,
        std::abs(eval.estimate.b - eval.truth.b) / eval.truth.b};
    eval.max_rel_error = *std::max_element(rel, rel + 5);
    report.idm_eval = eval;
    report.has_idm_eval = true;
  }

  {
    std::ofstream f(fs::path(config.out_dir) / "report.json");
    f << report.to_json().dump(2) << "\n";
  }
  return report;
}

}  // namespace drivesense
