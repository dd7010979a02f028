#pragma once

#include <optional>
#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// One row of the vehicle-dynamics log.
struct EgoSample {
  std::int64_t timestamp_us = 0;
  double speed = 0.0;  // m/s
  std::optional<double> accel;
  std::optional<double> steer_deg;
  std::optional<double> throttle;
  std::optional<double> brake;
};

/// Parses the dynamics CSV
/// (`timestamp_us,speed_mps,accel_mps2,steer_deg,throttle,brake`; trailing
/// columns optional, empty fields allowed). Rows are sorted by timestamp;
/// duplicate timestamps are rejected.
std::vector<EgoSample> parse_dynamics(std::string_view text);

/// Linear interpolation of ego speed at t. Throws std::out_of_range outside
/// the sampled span.
double ego_speed_at(const std::vector<EgoSample>& series, std::int64_t t_us);

/// Same interpolation for the acceleration column.
double ego_accel_at(const std::vector<EgoSample>& series, std::int64_t t_us);

bool dynamics_have_accel(const std::vector<EgoSample>& series);

struct LaneConfig {
  double lane_width = 3.5;
  int num_side_lanes = 1;
};

enum class Lane { ego, left, right, outside };

std::string to_string(Lane lane);

/// Lane of a tracked box by lateral center, straight-lane ego-frame
/// approximation: |cy| <= w/2 is the ego lane, the next band of one lane
/// width on each side is left/right.
Lane assign_lane(const TrackedBox& box, const LaneConfig& lanes);

struct LaneNeighbor {
  std::int64_t track_id = 0;
  double gap_m = 0.0;        // magnitude, bumper-to-bumper approximation
  double rel_speed = 0.0;    // positive = closing
};

struct LaneSummary {
  std::optional<LaneNeighbor> leader;
  std::optional<LaneNeighbor> follower;
};

struct SceneSummary {
  std::int64_t timestamp_us = 0;
  LaneSummary left;
  LaneSummary ego;
  LaneSummary right;

  const LaneSummary& lane(Lane l) const;
};

/// Nearest vehicle ahead (leader) and behind (follower) per lane, with gaps
/// and closing speeds. Gap = |cx| - (ego_length + track length)/2, clamped
/// to >= 0.1 m.
SceneSummary summarize_scene(const std::vector<TrackedBox>& tracks,
                             const LaneConfig& lanes, double ego_speed,
                             double ego_length, std::int64_t timestamp_us = 0);

}  // namespace drivesense
