#include "drivesense/pointcloud.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace drivesense {

void SensorProfile::validate() const {
  if (!(vfov_min_deg < vfov_max_deg)) {
    throw ConfigError("sensor profile '" + name + "': vfov_min must be < vfov_max");
  }
  for (size_t i = 0; i < channel_angles_deg.size(); ++i) {
    const double a = channel_angles_deg[i];
    if (a < vfov_min_deg || a > vfov_max_deg) {
      throw ConfigError("sensor profile '" + name + "': channel angle outside vFOV");
    }
    if (i > 0 && !(channel_angles_deg[i - 1] < a)) {
      throw ConfigError("sensor profile '" + name + "': channel angles must be strictly increasing");
    }
  }
}

SensorProfile puck_profile() {
  SensorProfile p;
  p.name = "puck";
  p.vfov_min_deg = -15.0;
  p.vfov_max_deg = 15.0;
  for (int i = 0; i < 16; ++i) p.channel_angles_deg.push_back(-15.0 + 2.0 * i);
  return p;
}

SensorProfile hdl64e_profile() {
  SensorProfile p;
  p.name = "hdl64e";
  p.vfov_min_deg = -24.9;
  p.vfov_max_deg = 2.0;
  for (int i = 0; i < 64; ++i) {
    p.channel_angles_deg.push_back(p.vfov_min_deg +
                                   i * (p.vfov_max_deg - p.vfov_min_deg) / 63.0);
  }
  return p;
}

SensorProfile profile_by_name(const std::string& name) {
  if (name == "puck") return puck_profile();
  if (name == "hdl64e") return hdl64e_profile();
  throw ConfigError("unknown sensor profile: '" + name + "'");
}

std::vector<MatchedChannel> intersect_profiles(const SensorProfile& source,
                                               const SensorProfile& target) {
  source.validate();
  target.validate();
  std::vector<MatchedChannel> out;
  for (double t : target.channel_angles_deg) {
    if (t < source.vfov_min_deg || t > source.vfov_max_deg) continue;
    double best = source.channel_angles_deg.empty()
                      ? t
                      : source.channel_angles_deg.front();
    for (double s : source.channel_angles_deg) {
      if (std::abs(s - t) < std::abs(best - t)) best = s;
    }
    out.push_back({t, best});
  }
  std::sort(out.begin(), out.end(),
            [](const MatchedChannel& a, const MatchedChannel& b) {
              return a.target_deg < b.target_deg;
            });
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double_field(const std::string& s, int line_no, const char* col) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": bad value for '" +
                     col + "': '" + s + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-finite '" +
                     std::string(col) + "'");
  }
  return v;
}

}  // namespace

PointCloud parse_cloud_csv(std::string_view text, const std::string& frame_id,
                           std::int64_t timestamp_us) {
  if (frame_id.empty()) throw SchemaError("frame_id must be non-empty");
  if (timestamp_us <= 0) throw SchemaError("timestamp_us must be positive");

  PointCloud cloud;
  cloud.frame_id = frame_id;
  cloud.timestamp_us = timestamp_us;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_vangle = false;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      const auto cols = split_csv_line(line);
      if (cols.size() < 5 || cols[0] != "x" || cols[1] != "y" || cols[2] != "z" ||
          cols[3] != "intensity" || cols[4] != "ring") {
        throw SchemaError("line 1: expected header x,y,z,intensity,ring[,vertical_angle]");
      }
      if (cols.size() >= 6 && cols[5] == "vertical_angle") have_vangle = true;
      else if (cols.size() >= 6) throw SchemaError("line 1: unexpected column '" + cols[5] + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    const size_t expected = have_vangle ? 6 : 5;
    if (f.size() != expected) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected) + " fields, got " +
                       std::to_string(f.size()));
    }
    Point p;
    p.x = parse_double_field(f[0], line_no, "x");
    p.y = parse_double_field(f[1], line_no, "y");
    p.z = parse_double_field(f[2], line_no, "z");
    p.intensity = parse_double_field(f[3], line_no, "intensity");
    if (p.intensity < 0.0 || p.intensity > 255.0) {
      throw SchemaError("line " + std::to_string(line_no) +
                        ": intensity outside [0, 255]");
    }
    p.ring = static_cast<int>(parse_double_field(f[4], line_no, "ring"));
    if (p.ring < 0) {
      throw SchemaError("line " + std::to_string(line_no) + ": negative ring index");
    }
    if (have_vangle && !f[5].empty()) {
      p.vertical_angle_deg = parse_double_field(f[5], line_no, "vertical_angle");
    }
    cloud.points.push_back(p);
  }
  if (!header_seen) throw SchemaError("empty input: missing header row");
  return cloud;
}

std::string cloud_to_csv(const PointCloud& cloud) {
  std::ostringstream out;
  out << "x,y,z,intensity,ring,vertical_angle\n";
  char buf[160];
  for (const Point& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%d,%.9g\n", p.x, p.y,
                  p.z, p.intensity, p.ring, vertical_angle_of(p));
    out << buf;
  }
  return out.str();
}

PointCloud decimate(const PointCloud& cloud,
                    const std::vector<MatchedChannel>& matched, double tol_deg) {
  if (!(tol_deg > 0.0)) throw ConfigError("decimate: tol_deg must be > 0");
  PointCloud out;
  out.timestamp_us = cloud.timestamp_us;
  out.frame_id = cloud.frame_id;
  for (const Point& p : cloud.points) {
    const double a = vertical_angle_of(p);
    for (const MatchedChannel& m : matched) {
      if (std::abs(a - m.source_deg) <= tol_deg) {
        out.points.push_back(p);
        break;
      }
    }
  }
  return out;
}

PointCloud rotate_z(const PointCloud& cloud, double angle_rad) {
  if (!std::isfinite(angle_rad)) throw std::domain_error("rotate_z: non-finite angle");
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  PointCloud out = cloud;
  for (Point& p : out.points) {
    const double x = p.x;
    const double y = p.y;
    p.x = c * x - s * y;
    p.y = s * x + c * y;
  }
  return out;
}

PointCloud crop(const PointCloud& cloud, const Bounds3& b) {
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max) || !(b.z_min < b.z_max)) {
    throw ConfigError("crop: bounds min must be < max per axis");
  }
  PointCloud out;
  out.timestamp_us = cloud.timestamp_us;
  out.frame_id = cloud.frame_id;
  for (const Point& p : cloud.points) {
    if (p.x >= b.x_min && p.x <= b.x_max && p.y >= b.y_min && p.y <= b.y_max &&
        p.z >= b.z_min && p.z <= b.z_max) {
      out.points.push_back(p);
    }
  }
  return out;
}

}  // namespace drivesense
