#pragma once

#include <utility>

#include "drivesense/types.hpp"

namespace drivesense {

/// Square top-view grid covering x, y in [-extent_m, extent_m].
struct GridConfig {
  double extent_m = 40.0;
  int cells_per_side = 608;
  double z_min = -2.0;
  double z_max = 1.25;

  void validate() const;
  double cell_size() const { return 2.0 * extent_m / cells_per_side; }
};

enum class MapOrigin { full, front, rear };

std::string to_string(MapOrigin o);
MapOrigin map_origin_from_string(const std::string& s);

/// Top-view FRGB map: height, intensity, density planes in [0, 1], row-major
/// with row 0 at the forward edge (x = extent) and col 0 at the left edge
/// (y = extent) of the presented frame.
///
/// A full map has rows == cols == cells_per_side and presents the ego frame.
/// Half maps produced by split_halves present a forward-facing frame that is
/// the ego frame rotated by view_rotation_rad (0 for the front half, pi for
/// the rear half); their rows cover x in (extent - rows*cell, extent].
struct BevMap {
  GridConfig config;
  int rows = 0;
  int cols = 0;
  MapOrigin origin = MapOrigin::full;
  double view_rotation_rad = 0.0;
  std::int64_t timestamp_us = 1;
  std::string frame_id = "frame";
  std::vector<float> height;
  std::vector<float> intensity;
  std::vector<float> density;

  float h(int r, int c) const { return height[r * cols + c]; }
  float i(int r, int c) const { return intensity[r * cols + c]; }
  float d(int r, int c) const { return density[r * cols + c]; }

  /// x range covered by this map in its presented frame.
  double x_min() const { return config.extent_m - rows * config.cell_size(); }
  double x_max() const { return config.extent_m; }

  bool cell_occupied(int r, int c) const {
    return h(r, c) > 0.0f || i(r, c) > 0.0f || d(r, c) > 0.0f;
  }
};

/// Rasterizes a cloud into an FRGB map. Points outside the extent or the
/// configured z range are ignored. Per occupied cell:
///   height    = (max z - z_min) / (z_max - z_min)
///   intensity = max intensity / 255
///   density   = min(1, ln(1 + count) / ln(64))
BevMap make_frgb(const PointCloud& cloud, const GridConfig& config);

/// Cell index of an ego/presented-frame position. Throws std::out_of_range
/// outside the covered region; exact boundary coordinates are accepted and
/// fall into the adjacent valid cell.
std::pair<int, int> meters_to_cell(const GridConfig& config, double x, double y);

/// Center coordinates of a cell.
std::pair<double, double> cell_to_meters(const GridConfig& config, int row, int col);

/// Splits a full map into the forward half and the 180-degree-rotated rear
/// half, both presented as forward-facing half maps. seam_margin_m extends
/// each half past the x = 0 seam so that straddling objects appear in both.
std::pair<BevMap, BevMap> split_halves(const BevMap& map, double seam_margin_m = 0.0);

}  // namespace drivesense
