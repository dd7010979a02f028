#pragma once

#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// One object of a KITTI-style label file: 15 whitespace-separated fields per
/// line (type, truncated, occluded, alpha, 2D bbox, 3D dimensions h/w/l,
/// 3D location, rotation_y). The 3D box is interpreted in the same frame as
/// the paired point cloud, with `location` the box center and `rotation_y`
/// the yaw about the vertical axis.
struct KittiLabel {
  std::string object_type;
  double truncated = 0.0;
  double occluded = 0.0;
  double alpha = 0.0;
  double bbox2d[4] = {0, 0, 0, 0};  // left, top, right, bottom (pass-through)
  double height = 0.0;
  double width = 0.0;
  double length = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;  // box center
  double rotation_y = 0.0;

  bool contains(const Point& p) const;
};

std::vector<KittiLabel> parse_kitti_labels(std::string_view text);
std::string kitti_labels_to_text(const std::vector<KittiLabel>& labels);

/// Keeps the vehicular labels (car, van, truck; case-insensitive) whose box
/// still contains at least `min_points` points of the decimated cloud.
std::vector<KittiLabel> decimate_labels(const std::vector<KittiLabel>& labels,
                                        const PointCloud& decimated,
                                        int min_points = 1);

}  // namespace drivesense
