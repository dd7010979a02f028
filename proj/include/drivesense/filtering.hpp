#pragma once

#include <optional>

#include "drivesense/types.hpp"

namespace drivesense {

enum class GroundRemovalMethod { plane, z_threshold };

struct GroundRemovalConfig {
  GroundRemovalMethod method = GroundRemovalMethod::plane;
  double inlier_threshold_m = 0.2;
  double max_normal_tilt_deg = 15.0;
  int iterations = 100;
  double min_inlier_fraction = 0.2;  // below this the fit is rejected
  double z_cutoff_m = -1.5;          // z_threshold mode only
  std::uint64_t seed = 12345;
};

/// Plane as ax + by + cz + d = 0 with (a,b,c) unit length.
struct PlaneCoefficients {
  double a = 0.0, b = 0.0, c = 1.0, d = 0.0;
  double signed_distance(const Point& p) const {
    return a * p.x + b * p.y + c * p.z + d;
  }
};

struct GroundRemovalResult {
  PointCloud cloud;                       // input minus ground points
  std::optional<PlaneCoefficients> plane; // nullopt in z_threshold mode or on failure
  bool plane_found = false;               // false when no admissible plane exists
};

/// Removes the ground surface. Plane mode runs a random-sample-consensus fit
/// constrained to near-horizontal planes (normal within max_normal_tilt_deg of
/// +z) and drops the inliers; when no admissible plane is found the input is
/// returned unchanged with plane_found = false. z_threshold mode drops points
/// below z_cutoff_m.
GroundRemovalResult remove_ground(const PointCloud& cloud,
                                  const GroundRemovalConfig& cfg = {});

/// Euclidean connectivity clustering in the x-y plane: points connect when
/// their planar distance is <= eps_m. Groups smaller than min_cluster_size are
/// discarded. Returned groups are disjoint index lists, each sorted ascending,
/// ordered by their smallest member.
std::vector<std::vector<int>> cluster(const PointCloud& cloud, double eps_m = 0.5,
                                      int min_cluster_size = 5);

}  // namespace drivesense
