#include "drivesense/bev.hpp"

#include <algorithm>
#include <cmath>

namespace drivesense {

void GridConfig::validate() const {
  if (!(extent_m > 0.0)) throw ConfigError("grid: extent_m must be > 0");
  if (cells_per_side < 2) throw ConfigError("grid: cells_per_side must be >= 2");
  if (!(z_min < z_max)) throw ConfigError("grid: z_min must be < z_max");
}

std::string to_string(MapOrigin o) {
  switch (o) {
    case MapOrigin::full: return "full";
    case MapOrigin::front: return "front";
    case MapOrigin::rear: return "rear";
  }
  return "full";
}

MapOrigin map_origin_from_string(const std::string& s) {
  if (s == "full") return MapOrigin::full;
  if (s == "front") return MapOrigin::front;
  if (s == "rear") return MapOrigin::rear;
  throw SchemaError("unknown map origin: '" + s + "'");
}

namespace {

// Cell r covers x in (R - (r+1)*cell, R - r*cell]; same for columns in y.
// Exact lower boundary coordinates are clamped into the last cell.
int axis_index(double coord, double extent, double cell, int n) {
  const int idx = static_cast<int>(std::floor((extent - coord) / cell));
  return std::clamp(idx, 0, n - 1);
}

}  // namespace

BevMap make_frgb(const PointCloud& cloud, const GridConfig& config) {
  config.validate();
  const int n = config.cells_per_side;
  BevMap map;
  map.config = config;
  map.rows = n;
  map.cols = n;
  map.timestamp_us = cloud.timestamp_us;
  map.frame_id = cloud.frame_id;
  map.height.assign(static_cast<size_t>(n) * n, 0.0f);
  map.intensity.assign(static_cast<size_t>(n) * n, 0.0f);
  map.density.assign(static_cast<size_t>(n) * n, 0.0f);

  const double r_ext = config.extent_m;
  const double cell = config.cell_size();
  const double z_span = config.z_max - config.z_min;
  std::vector<int> counts(static_cast<size_t>(n) * n, 0);

  for (const Point& p : cloud.points) {
    if (p.x < -r_ext || p.x > r_ext || p.y < -r_ext || p.y > r_ext) continue;
    if (p.z < config.z_min || p.z > config.z_max) continue;
    const int r = axis_index(p.x, r_ext, cell, n);
    const int c = axis_index(p.y, r_ext, cell, n);
    const size_t idx = static_cast<size_t>(r) * n + c;
    const float h = static_cast<float>(std::clamp((p.z - config.z_min) / z_span, 0.0, 1.0));
    const float in = static_cast<float>(std::clamp(p.intensity / 255.0, 0.0, 1.0));
    map.height[idx] = std::max(map.height[idx], h);
    map.intensity[idx] = std::max(map.intensity[idx], in);
    ++counts[idx];
  }
  const double log64 = std::log(64.0);
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) {
      map.density[i] = static_cast<float>(
          std::min(1.0, std::log(1.0 + counts[i]) / log64));
    }
  }
  return map;
}

std::pair<int, int> meters_to_cell(const GridConfig& config, double x, double y) {
  config.validate();
  const double r_ext = config.extent_m;
  if (x < -r_ext || x > r_ext || y < -r_ext || y > r_ext) {
    throw std::out_of_range("meters_to_cell: coordinate outside extent");
  }
  const double cell = config.cell_size();
  const int n = config.cells_per_side;
  return {axis_index(x, r_ext, cell, n), axis_index(y, r_ext, cell, n)};
}

std::pair<double, double> cell_to_meters(const GridConfig& config, int row, int col) {
  config.validate();
  if (row < 0 || row >= config.cells_per_side || col < 0 || col >= config.cells_per_side) {
    throw std::out_of_range("cell_to_meters: cell index outside grid");
  }
  const double cell = config.cell_size();
  return {config.extent_m - (row + 0.5) * cell, config.extent_m - (col + 0.5) * cell};
}

std::pair<BevMap, BevMap> split_halves(const BevMap& map, double seam_margin_m) {
  if (map.origin != MapOrigin::full) {
    throw ConfigError("split_halves: input must be a full map");
  }
  const int n = map.config.cells_per_side;
  if (n % 2 != 0) throw ConfigError("split_halves: cells_per_side must be even");
  if (seam_margin_m < 0.0) throw ConfigError("split_halves: negative seam margin");

  const double cell = map.config.cell_size();
  int margin_cells = static_cast<int>(std::ceil(seam_margin_m / cell - 1e-9));
  margin_cells = std::clamp(margin_cells, 0, n / 2);
  const int half_rows = n / 2 + margin_cells;

  BevMap front;
  front.config = map.config;
  front.rows = half_rows;
  front.cols = n;
  front.origin = MapOrigin::front;
  front.view_rotation_rad = 0.0;
  front.timestamp_us = map.timestamp_us;
  front.frame_id = map.frame_id;
  front.height.resize(static_cast<size_t>(half_rows) * n);
  front.intensity.resize(static_cast<size_t>(half_rows) * n);
  front.density.resize(static_cast<size_t>(half_rows) * n);
  for (int r = 0; r < half_rows; ++r) {
    for (int c = 0; c < n; ++c) {
      const size_t dst = static_cast<size_t>(r) * n + c;
      const size_t src = static_cast<size_t>(r) * n + c;
      front.height[dst] = map.height[src];
      front.intensity[dst] = map.intensity[src];
      front.density[dst] = map.density[src];
    }
  }

  BevMap rear = front;
  rear.origin = MapOrigin::rear;
  rear.view_rotation_rad = M_PI;
  // 180-degree map-space rotation of the rear block: presented row r maps to
  // full-map row n-1-r, presented col c to full-map col n-1-c.
  for (int r = 0; r < half_rows; ++r) {
    for (int c = 0; c < n; ++c) {
      const size_t dst = static_cast<size_t>(r) * n + c;
      const size_t src = static_cast<size_t>(n - 1 - r) * n + (n - 1 - c);
      rear.height[dst] = map.height[src];
      rear.intensity[dst] = map.intensity[src];
      rear.density[dst] = map.density[src];
    }
  }
  return {std::move(front), std::move(rear)};
}

}  // namespace drivesense
