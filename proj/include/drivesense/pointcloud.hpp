#pragma once

#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// Vertical-beam layout of a spinning Lidar unit.
struct SensorProfile {
  std::string name;
  std::vector<double> channel_angles_deg;  // strictly increasing
  double vfov_min_deg = 0.0;
  double vfov_max_deg = 0.0;

  void validate() const;
};

/// 16-channel unit, -15..+15 deg in 2 deg steps.
SensorProfile puck_profile();

/// 64-channel unit modeled with evenly spaced beams over [-24.9, +2.0] deg.
SensorProfile hdl64e_profile();

SensorProfile profile_by_name(const std::string& name);

struct MatchedChannel {
  double target_deg = 0.0;  // the channel being mimicked
  double source_deg = 0.0;  // nearest beam of the sensor that recorded the data
};

/// Target channels that fall inside the source vFOV, each paired with the
/// nearest source beam. Sorted by angle; empty when the vFOVs are disjoint.
std::vector<MatchedChannel> intersect_profiles(const SensorProfile& source,
                                               const SensorProfile& target);

/// Parses the point-cloud CSV contract:
/// header `x,y,z,intensity,ring,vertical_angle`, one point per row,
/// `vertical_angle` column optional. Row order is preserved.
PointCloud parse_cloud_csv(std::string_view text, const std::string& frame_id,
                           std::int64_t timestamp_us);

std::string cloud_to_csv(const PointCloud& cloud);

/// Keeps the points whose vertical angle lies within `tol_deg` of one of the
/// matched source beams. Idempotent; survivors are copied unmodified.
PointCloud decimate(const PointCloud& cloud,
                    const std::vector<MatchedChannel>& matched,
                    double tol_deg = 0.5);

PointCloud rotate_z(const PointCloud& cloud, double angle_rad);

struct Bounds3 {
  double x_min, x_max;
  double y_min, y_max;
  double z_min, z_max;
};

/// Keeps points inside or on the bounds.
PointCloud crop(const PointCloud& cloud, const Bounds3& bounds);

}  // namespace drivesense
