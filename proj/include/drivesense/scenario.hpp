#pragma once

#include "drivesense/config.hpp"
#include "drivesense/idm.hpp"
#include "drivesense/pointcloud.hpp"
#include "drivesense/scene.hpp"
#include "drivesense/signal.hpp"

namespace drivesense {

/// A scripted surrounding vehicle: fixed lateral lane offset, longitudinal
/// motion from a piecewise-constant speed profile.
struct VehicleSpec {
  std::string name = "vehicle";
  double lane_offset_m = 0.0;  // world y; the ego drives at y = 0
  double init_pos_m = 30.0;    // world x at t = 0 (ego starts at x = 0)
  SpeedProfile speed{{{0.0, 15.0}}};
  double length = 4.5;
  double width = 1.8;
  double height = 1.5;
  ObjectClass cls = ObjectClass::car;
};

struct EgoSpec {
  bool idm_driven = true;
  IdmParams idm;
  double init_speed = 10.0;
  SpeedProfile scripted{{{0.0, 10.0}}};  // used when idm_driven is false
  double length = 4.5;
  double width = 1.8;
};

struct ScenarioSpec {
  EgoSpec ego;
  std::vector<VehicleSpec> vehicles;
  SensorProfile sensor = puck_profile();
  int frame_count = 100;
  double fps = 10.0;
  bool ground_plane = true;
  double sensor_height_m = 1.7;
  double max_range_m = 75.0;
  double azimuth_step_deg = 0.25;
  double range_noise_sigma_m = 0.0;
  double vehicle_intensity = 180.0;
  double ground_intensity = 40.0;
  std::uint64_t seed = 1;
};

ScenarioSpec scenario_from_config(const KeyValueConfig& cfg);

struct GeneratedScenario {
  ScenarioSpec spec;
  std::vector<PointCloud> frames;
  std::vector<TrackedFrame> truth;  // per-frame ground truth in the ego frame
  std::vector<EgoSample> dynamics;
  SignalSeries physiology;
  bool has_idm_truth = false;
  IdmParams idm_truth;
};

/// Simulates the scripted world, renders ring-structured point clouds by
/// casting the sensor's beams against vehicle boxes (and the ground plane),
/// and emits ground truth for every downstream stage. Deterministic for a
/// fixed seed; the seed only shapes measurement noise, never trajectories.
/// Throws ConfigError when scripted trajectories collide.
GeneratedScenario generate_scenario(const ScenarioSpec& spec);

/// Writes frames/frame_*.csv, frames.csv manifest, dynamics.csv,
/// truth_tracks.jsonl, physiology.csv, and truth_params.txt under out_dir.
void write_scenario(const GeneratedScenario& scenario, const std::string& out_dir);

}  // namespace drivesense
