#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "drivesense/pipeline.hpp"
#include "drivesense/scenario.hpp"

using namespace drivesense;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ScenarioSpec pipeline_scenario() {
  ScenarioSpec spec;
  spec.frame_count = 30;
  spec.fps = 5.0;
  spec.seed = 4;
  spec.ego.idm_driven = true;
  spec.ego.idm = {2.0, 20.0, 1.5, 1.0, 2.0, 4.0};
  spec.ego.init_speed = 8.0;
  VehicleSpec leader;
  leader.init_pos_m = 25.0;
  leader.speed = SpeedProfile{{{0.0, 12.0}, {3.0, 6.0}}};
  spec.vehicles.push_back(leader);
  return spec;
}

PipelineConfig base_config(const fs::path& data, const fs::path& out) {
  PipelineConfig cfg;
  cfg.grid.cells_per_side = 160;  // fast at test scale
  cfg.frames_manifest = (data / "frames.csv").string();
  cfg.dynamics_path = (data / "dynamics.csv").string();
  cfg.physiology_path = (data / "physiology.csv").string();
  cfg.truth_tracks_path = (data / "truth_tracks.jsonl").string();
  cfg.truth_params_path = (data / "truth_params.txt").string();
  cfg.out_dir = out.string();
  cfg.idm_window_s = 3.0;
  cfg.idm_stride_s = 1.5;
  cfg.fit.min_samples = 10;
  return cfg;
}

}  // namespace

TEST_CASE("pipeline: end-to-end run over a generated scenario") {
  TempDir data("ds_pipe_data");
  TempDir out("ds_pipe_out");
  write_scenario(generate_scenario(pipeline_scenario()), data.path.string());

  const PipelineConfig cfg = base_config(data.path, out.path);
  const RunReport report = run_pipeline(cfg);

  CHECK(report.frames_processed == 30);
  CHECK(report.dropped.empty());
  CHECK(report.follow_samples > 20);
  CHECK(!report.params.windows.empty());
  CHECK(report.has_tracking_eval);
  CHECK(report.tracking_eval.position_rmse_m < 0.2);
  CHECK(!report.correlations.empty());

  CHECK(fs::exists(out.path / "tracked.jsonl"));
  CHECK(fs::exists(out.path / "scene.jsonl"));
  CHECK(fs::exists(out.path / "follow.csv"));
  CHECK(fs::exists(out.path / "params.csv"));
  CHECK(fs::exists(out.path / "report.json"));
  CHECK(fs::exists(out.path / "correlation.txt"));
}

TEST_CASE("pipeline: missing physiology with correlation enabled is a config error") {
  TempDir data("ds_pipe_data2");
  TempDir out("ds_pipe_out2");
  ScenarioSpec spec = pipeline_scenario();
  spec.frame_count = 3;
  write_scenario(generate_scenario(spec), data.path.string());

  PipelineConfig cfg = base_config(data.path, out.path);
  cfg.physiology_path = (data.path / "does_not_exist.csv").string();
  CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
  // nothing was processed
  CHECK_FALSE(fs::exists(out.path / "report.json"));
}

TEST_CASE("pipeline: unreachable detector endpoint fails at the detection stage, frame 1") {
  TempDir data("ds_pipe_data3");
  TempDir out("ds_pipe_out3");
  ScenarioSpec spec = pipeline_scenario();
  spec.frame_count = 3;
  write_scenario(generate_scenario(spec), data.path.string());

  PipelineConfig cfg = base_config(data.path, out.path);
  cfg.detector_kind = DetectorKind::remote;
  cfg.remote_endpoint = "127.0.0.1:1";  // nothing listens here
  cfg.detect_workers = 1;
  try {
    run_pipeline(cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage == "detection");
    CHECK(e.frame_id == "frame_0");
  }
}

TEST_CASE("pipeline: ground removal and clustering stages run when toggled") {
  TempDir data("ds_pipe_data4");
  TempDir out("ds_pipe_out4");
  ScenarioSpec spec = pipeline_scenario();
  spec.frame_count = 4;
  write_scenario(generate_scenario(spec), data.path.string());

  PipelineConfig cfg = base_config(data.path, out.path);
  cfg.ground_removal = true;
  cfg.clustering = true;
  const RunReport report = run_pipeline(cfg);
  CHECK(report.frames_processed == 4);
  CHECK(fs::exists(out.path / "clusters.csv"));
}

TEST_CASE("pipeline: determinism across two runs with the same seed") {
  TempDir data("ds_pipe_data5");
  TempDir out1("ds_pipe_out5a");
  TempDir out2("ds_pipe_out5b");
  ScenarioSpec spec = pipeline_scenario();
  spec.frame_count = 10;
  write_scenario(generate_scenario(spec), data.path.string());

  PipelineConfig cfg1 = base_config(data.path, out1.path);
  PipelineConfig cfg2 = base_config(data.path, out2.path);
  run_pipeline(cfg1);
  run_pipeline(cfg2);

  for (const char* name : {"tracked.jsonl", "scene.jsonl", "follow.csv", "params.csv",
                           "report.json", "correlation.txt"}) {
    std::ifstream a(out1.path / name, std::ios::binary);
    std::ifstream b(out2.path / name, std::ios::binary);
    REQUIRE(a);
    REQUIRE(b);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
  }
}
