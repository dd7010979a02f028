// drivesense command line tool: stage-by-stage commands over recorded data,
// the end-to-end pipeline, the synthetic scenario generator, and the two
// services.
#include <CLI11.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "drivesense/bev_io.hpp"
#include "drivesense/detector.hpp"
#include "drivesense/kitti.hpp"
#include "drivesense/pipeline.hpp"
#include "drivesense/plots.hpp"
#include "drivesense/pointcloud.hpp"
#include "drivesense/scenario.hpp"
#include "drivesense/services.hpp"

namespace ds = drivesense;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ds::ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ds::ConfigError("cannot write file: " + path);
  out << content;
}

struct DetectorFlags {
  std::string selection = "oracle";  // "oracle" or "remote=URL"
  std::string truth_path;
  double noise_sigma = 0.0;
  double fn_rate = 0.0;
  double fp_rate = 0.0;
  int fp_slots = 0;
  std::uint64_t seed = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--detector", selection, "oracle | remote=URL")
        ->capture_default_str();
    cmd->add_option("--truth", truth_path, "ground-truth frames (jsonl) for the oracle");
    cmd->add_option("--oracle-noise", noise_sigma, "oracle box-center noise sigma (m)");
    cmd->add_option("--oracle-fn-rate", fn_rate, "oracle false-negative rate");
    cmd->add_option("--oracle-fp-rate", fp_rate, "oracle false-positive rate");
    cmd->add_option("--oracle-fp-slots", fp_slots, "oracle false-positive slots");
  }

  std::shared_ptr<ds::Detector> make() const {
    if (selection.rfind("remote=", 0) == 0) {
      return std::make_shared<ds::RemoteDetector>(selection.substr(7));
    }
    if (selection != "oracle") {
      throw ds::ConfigError("--detector must be 'oracle' or 'remote=URL'");
    }
    ds::OracleConfig cfg;
    cfg.noise_sigma_m = noise_sigma;
    cfg.false_negative_rate = fn_rate;
    cfg.false_positive_rate = fp_rate;
    cfg.false_positive_slots = fp_slots;
    cfg.seed = seed;
    auto oracle = std::make_shared<ds::OracleDetector>(cfg);
    if (!truth_path.empty()) oracle->load_truth_jsonl(read_file(truth_path));
    return oracle;
  }
};

void add_grid_flags(CLI::App* cmd, ds::GridConfig* grid) {
  cmd->add_option("--extent", grid->extent_m, "half-width of the map region (m)")
      ->capture_default_str();
  cmd->add_option("--cells", grid->cells_per_side, "cells per map side")
      ->capture_default_str();
  cmd->add_option("--z-min", grid->z_min, "lower z cutoff (m)")->capture_default_str();
  cmd->add_option("--z-max", grid->z_max, "upper z cutoff (m)")->capture_default_str();
}

// Partial report reader: enough for plotting.
ds::RunReport report_from_json(const ds::json& j) {
  ds::RunReport report;
  if (j.contains("estimation_windows")) {
    for (const ds::json& w : j["estimation_windows"]) {
      ds::ParamWindow pw;
      pw.t_center_us = w.at("t_center_us").get<std::int64_t>();
      pw.params.s0 = w.at("s0").get<double>();
      pw.params.v0 = w.at("v0").get<double>();
      pw.params.T = w.at("T").get<double>();
      pw.params.a = w.at("a").get<double>();
      pw.params.b = w.at("b").get<double>();
      pw.sse = w.at("sse").get<double>();
      pw.sample_count = w.at("samples").get<int>();
      report.params.windows.push_back(pw);
    }
  }
  if (j.contains("correlations")) {
    for (const auto& [name, r] : j["correlations"].items()) {
      if (r.is_number()) report.correlations.emplace_back(name, r.get<double>());
    }
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lidar scene perception and driver characterization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  app.add_option("--config", config_path, "key-value config file")->envname("DRIVESENSE_CONFIG");
  app.add_option("--seed", seed, "master random seed")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();

  // ---- decimate ----
  auto* cmd_decimate = app.add_subcommand("decimate",
                                          "reduce a cloud to the channels a coarser sensor would see");
  std::string in_path, out_path, labels_path, labels_out;
  std::string source_profile = "hdl64e", target_profile = "puck";
  double tol_deg = 0.5;
  int min_points = 1;
  std::string frame_id = "frame";
  std::int64_t timestamp_us = 1'000'000;
  cmd_decimate->add_option("--in", in_path, "input cloud csv")->required();
  cmd_decimate->add_option("--out", out_path, "output cloud csv")->required();
  cmd_decimate->add_option("--source", source_profile, "profile of the recorded data")
      ->capture_default_str();
  cmd_decimate->add_option("--target", target_profile, "profile to mimic")->capture_default_str();
  cmd_decimate->add_option("--tol", tol_deg, "channel matching tolerance (deg)")
      ->capture_default_str();
  cmd_decimate->add_option("--labels", labels_path, "KITTI labels to decimate alongside");
  cmd_decimate->add_option("--labels-out", labels_out, "output path for kept labels");
  cmd_decimate->add_option("--min-points", min_points, "points required inside a kept label")
      ->capture_default_str();
  cmd_decimate->callback([&] {
    const auto matched = ds::intersect_profiles(ds::profile_by_name(source_profile),
                                                ds::profile_by_name(target_profile));
    const ds::PointCloud cloud = ds::parse_cloud_csv(read_file(in_path), frame_id, timestamp_us);
    const ds::PointCloud decimated = ds::decimate(cloud, matched, tol_deg);
    write_file(out_path, ds::cloud_to_csv(decimated));
    std::cout << "matched channels: " << matched.size() << ", points kept: "
              << decimated.points.size() << "/" << cloud.points.size() << "\n";
    if (!labels_path.empty()) {
      const auto labels = ds::parse_kitti_labels(read_file(labels_path));
      const auto kept = ds::decimate_labels(labels, decimated, min_points);
      if (labels_out.empty()) throw ds::ConfigError("--labels requires --labels-out");
      write_file(labels_out, ds::kitti_labels_to_text(kept));
      std::cout << "labels kept: " << kept.size() << "/" << labels.size() << "\n";
    }
  });

  // ---- bev ----
  auto* cmd_bev = app.add_subcommand("bev", "rasterize a cloud into an FRGB map (png + sidecar)");
  ds::GridConfig grid;
  std::string png_out, meta_out;
  cmd_bev->add_option("--in", in_path, "input cloud csv")->required();
  cmd_bev->add_option("--out-png", png_out, "output map png")->required();
  cmd_bev->add_option("--out-meta", meta_out, "output sidecar metadata");
  cmd_bev->add_option("--frame-id", frame_id, "frame id")->capture_default_str();
  cmd_bev->add_option("--timestamp-us", timestamp_us, "frame timestamp")->capture_default_str();
  add_grid_flags(cmd_bev, &grid);
  cmd_bev->callback([&] {
    const ds::PointCloud cloud = ds::parse_cloud_csv(read_file(in_path), frame_id, timestamp_us);
    const ds::BevMap map = ds::make_frgb(cloud, grid);
    write_file(png_out, ds::map_to_png(map));
    write_file(meta_out.empty() ? png_out + ".meta" : meta_out, ds::map_sidecar_text(map));
  });

  // ---- detect ----
  auto* cmd_detect = app.add_subcommand("detect", "run object detection on one cloud");
  DetectorFlags det_flags;
  bool full_azimuth = false;
  double consolidation_iou = 0.3, seam_margin = 0.0;
  cmd_detect->add_option("--in", in_path, "input cloud csv")->required();
  cmd_detect->add_option("--out", out_path, "output detections jsonl (one frame object)");
  cmd_detect->add_option("--frame-id", frame_id, "frame id")->capture_default_str();
  cmd_detect->add_option("--timestamp-us", timestamp_us, "frame timestamp")->capture_default_str();
  cmd_detect->add_flag("--full-azimuth", full_azimuth,
                       "2-step 360-degree detection instead of a single map pass");
  cmd_detect->add_option("--consolidation-iou", consolidation_iou)->capture_default_str();
  cmd_detect->add_option("--seam-margin", seam_margin, "overlap margin past the seam (m)");
  add_grid_flags(cmd_detect, &grid);
  det_flags.add_to(cmd_detect);
  cmd_detect->callback([&] {
    det_flags.seed = seed;
    auto detector = det_flags.make();
    const ds::PointCloud cloud = ds::parse_cloud_csv(read_file(in_path), frame_id, timestamp_us);
    ds::DetectionFrame frame;
    frame.frame_id = frame_id;
    frame.timestamp_us = timestamp_us;
    if (full_azimuth) {
      ds::FullAzimuthConfig fa{grid, consolidation_iou, seam_margin};
      frame.boxes = ds::detect_full_azimuth(cloud, *detector, fa);
    } else {
      frame.boxes = ds::detect(ds::make_frgb(cloud, grid), *detector);
    }
    const std::string line = ds::detection_frame_to_json(frame).dump() + "\n";
    if (out_path.empty()) std::cout << line;
    else write_file(out_path, line);
  });

  // ---- track ----
  auto* cmd_track = app.add_subcommand("track", "run the tracker over a detection frame stream");
  ds::TrackerConfig tracker_cfg;
  cmd_track->add_option("--in", in_path, "detection frames (jsonl)")->required();
  cmd_track->add_option("--out", out_path, "tracked frames (jsonl)")->required();
  cmd_track->add_option("--confirm-hits", tracker_cfg.confirm_hits)->capture_default_str();
  cmd_track->add_option("--max-misses", tracker_cfg.max_misses)->capture_default_str();
  cmd_track->add_option("--gate-iou", tracker_cfg.gate_iou)->capture_default_str();
  cmd_track->add_option("--process-noise", tracker_cfg.process_noise_accel_sigma)
      ->capture_default_str();
  cmd_track->add_option("--meas-noise", tracker_cfg.meas_noise_sigma)->capture_default_str();
  cmd_track->callback([&] {
    ds::Tracker tracker(tracker_cfg);
    std::istringstream in(read_file(in_path));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const ds::DetectionFrame frame = ds::detection_frame_from_json(ds::json::parse(line));
      out << ds::tracked_frame_to_json(tracker.update_frame(frame)).dump() << "\n";
    }
    write_file(out_path, out.str());
  });

  // ---- scene ----
  auto* cmd_scene = app.add_subcommand("scene", "derive lane leader/follower summaries");
  ds::LaneConfig lanes;
  std::string dynamics_path;
  double ego_length = 4.5;
  cmd_scene->add_option("--in", in_path, "tracked frames (jsonl)")->required();
  cmd_scene->add_option("--dynamics", dynamics_path, "ego dynamics csv")->required();
  cmd_scene->add_option("--out", out_path, "scene summaries (jsonl)")->required();
  cmd_scene->add_option("--lane-width", lanes.lane_width)->capture_default_str();
  cmd_scene->add_option("--ego-length", ego_length)->capture_default_str();
  cmd_scene->callback([&] {
    const auto dynamics = ds::parse_dynamics(read_file(dynamics_path));
    std::istringstream in(read_file(in_path));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const ds::TrackedFrame frame = ds::tracked_frame_from_json(ds::json::parse(line));
      double speed = 0.0;
      try {
        speed = ds::ego_speed_at(dynamics, frame.timestamp_us);
      } catch (const std::out_of_range&) {
      }
      const ds::SceneSummary s =
          ds::summarize_scene(frame.boxes, lanes, speed, ego_length, frame.timestamp_us);
      auto side = [](const std::optional<ds::LaneNeighbor>& n) -> ds::json {
        if (!n) return nullptr;
        return ds::json{{"id", n->track_id}, {"gap", n->gap_m}, {"rel_speed", n->rel_speed}};
      };
      for (const auto& [name, lane] :
           {std::pair{"left", &s.left}, {"ego", &s.ego}, {"right", &s.right}}) {
        out << ds::json{{"timestamp_us", s.timestamp_us},
                        {"lane", name},
                        {"leader", side(lane->leader)},
                        {"follower", side(lane->follower)}}
                   .dump()
            << "\n";
      }
    }
    write_file(out_path, out.str());
  });

  // ---- idm-fit ----
  auto* cmd_fit = app.add_subcommand("idm-fit", "sliding-window IDM estimation over follow data");
  double window_s = 10.0, stride_s = 5.0;
  ds::IdmBounds bounds;
  cmd_fit->add_option("--in", in_path, "follow samples csv")->required();
  cmd_fit->add_option("--out", out_path, "parameter series csv")->required();
  cmd_fit->add_option("--window", window_s, "window length (s)")->capture_default_str();
  cmd_fit->add_option("--stride", stride_s, "window stride (s)")->capture_default_str();
  cmd_fit->callback([&] {
    const auto samples = ds::parse_follow_csv(read_file(in_path));
    ds::FitConfig fit_cfg;
    fit_cfg.seed = seed;
    const ds::ParamSeries series =
        ds::sliding_estimation(samples, window_s, stride_s, bounds, fit_cfg);
    write_file(out_path, ds::param_series_to_csv(series));
    std::cout << "windows fitted: " << series.windows.size() << ", skipped: "
              << series.skipped.size() << "\n";
  });

  // ---- correlate ----
  auto* cmd_corr = app.add_subcommand("correlate",
                                      "Pearson correlation of parameter series vs a signal");
  std::string params_path, signal_path;
  double grid_hz = 2.0;
  cmd_corr->add_option("--params", params_path, "parameter series csv")->required();
  cmd_corr->add_option("--signal", signal_path, "physiology csv")->required();
  cmd_corr->add_option("--out", out_path, "key-value correlation report");
  cmd_corr->add_option("--grid-hz", grid_hz, "resampling grid (Hz)")->capture_default_str();
  cmd_corr->callback([&] {
    const std::string text = read_file(params_path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t_center_us,s0,v0,T,a,b,sse", 0) != 0) {
      throw ds::SchemaError("parameter csv: unexpected header");
    }
    ds::SignalSeries series[5];
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string field;
      double v[7];
      for (int i = 0; i < 7; ++i) {
        if (!std::getline(ls, field, ',')) throw ds::ParseError("parameter csv: short row");
        v[i] = std::stod(field);
      }
      for (int i = 0; i < 5; ++i) {
        series[i].timestamps_us.push_back(static_cast<std::int64_t>(v[0]));
        series[i].values.push_back(v[1 + i]);
      }
    }
    const ds::SignalSeries signal = ds::parse_signal_csv(read_file(signal_path));
    const char* names[5] = {"s0", "v0", "T", "a", "b"};
    std::ostringstream report;
    for (int i = 0; i < 5; ++i) {
      try {
        const double r = ds::pearson(series[i], signal, series[i].t_min(),
                                     series[i].t_max(), grid_hz);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s=%.9g\n", names[i], r);
        report << buf;
      } catch (const std::exception&) {
        report << names[i] << "=undefined\n";
      }
    }
    if (out_path.empty()) std::cout << report.str();
    else write_file(out_path, report.str());
  });

  // ---- gen-scenario ----
  auto* cmd_gen = app.add_subcommand("gen-scenario", "generate a synthetic recorded scenario");
  cmd_gen->callback([&] {
    ds::ScenarioSpec spec;
    if (!config_path.empty()) {
      spec = ds::scenario_from_config(ds::KeyValueConfig::parse_file(config_path));
    }
    if (app.count("--seed")) spec.seed = seed;
    const ds::GeneratedScenario scenario = ds::generate_scenario(spec);
    ds::write_scenario(scenario, out_dir);
    std::cout << "wrote " << scenario.frames.size() << " frames to " << out_dir << "\n";
  });

  // ---- pipeline ----
  auto* cmd_pipeline = app.add_subcommand("pipeline", "run the full chain over recorded data");
  std::string detector_override;
  cmd_pipeline->add_option("--detector", detector_override, "oracle | remote=URL");
  cmd_pipeline->callback([&] {
    if (config_path.empty()) throw ds::ConfigError("pipeline: --config is required");
    ds::KeyValueConfig kv = ds::KeyValueConfig::parse_file(config_path);
    // flags override file values
    if (app.count("--out-dir")) kv.set("io.out_dir", out_dir);
    if (app.count("--seed")) kv.set("pipeline.seed", std::to_string(seed));
    if (!detector_override.empty()) {
      if (detector_override.rfind("remote=", 0) == 0) {
        kv.set("detector.kind", "remote");
        kv.set("detector.endpoint", detector_override.substr(7));
      } else {
        kv.set("detector.kind", detector_override);
      }
    }
    const ds::PipelineConfig cfg = ds::pipeline_config_from(kv);
    const ds::RunReport report = ds::run_pipeline(cfg);
    std::cout << "frames processed: " << report.frames_processed << ", dropped: "
              << report.dropped.size() << ", estimation windows: "
              << report.params.windows.size() << "\n";
    for (const auto& [name, r] : report.correlations) {
      std::cout << "  pcc " << name << " = " << r << "\n";
    }
  });

  // ---- plot ----
  auto* cmd_plot = app.add_subcommand("plot", "render SVG plots from a run report");
  std::string report_path, physiology_path;
  cmd_plot->add_option("--report", report_path, "report.json from a pipeline run")->required();
  cmd_plot->add_option("--physiology", physiology_path, "physiology csv to overlay");
  cmd_plot->callback([&] {
    const ds::RunReport report = report_from_json(ds::json::parse(read_file(report_path)));
    ds::SignalSeries physiology;
    if (!physiology_path.empty()) physiology = ds::parse_signal_csv(read_file(physiology_path));
    for (const std::string& note : ds::emit_plots(report, physiology, out_dir)) {
      std::cout << note << "\n";
    }
  });

  // ---- serve-ods ----
  auto* cmd_ods = app.add_subcommand("serve-ods", "serve the detection service");
  std::string bind_addr = "127.0.0.1:8081";
  DetectorFlags serve_det_flags;
  cmd_ods->add_option("--bind", bind_addr, "host:port")->capture_default_str();
  serve_det_flags.add_to(cmd_ods);
  cmd_ods->callback([&] {
    serve_det_flags.seed = seed;
    const auto colon = bind_addr.rfind(':');
    if (colon == std::string::npos) throw ds::ConfigError("--bind expects host:port");
    ds::OdsServer server(serve_det_flags.make());
    const int port = server.start(bind_addr.substr(0, colon),
                                  std::stoi(bind_addr.substr(colon + 1)));
    std::cout << "detection service listening on " << bind_addr.substr(0, colon) << ":"
              << port << "\n";
    ::pause();
  });

  // ---- serve-mots ----
  auto* cmd_mots = app.add_subcommand("serve-mots", "serve the tracking service");
  cmd_mots->add_option("--bind", bind_addr, "host:port")->capture_default_str();
  cmd_mots->callback([&] {
    const auto colon = bind_addr.rfind(':');
    if (colon == std::string::npos) throw ds::ConfigError("--bind expects host:port");
    ds::MotsServer server;
    const int port = server.start(bind_addr.substr(0, colon),
                                  std::stoi(bind_addr.substr(colon + 1)));
    std::cout << "tracking service listening on " << bind_addr.substr(0, colon) << ":"
              << port << "\n";
    ::pause();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const ds::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const ds::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ds::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return kExitOk;
}
