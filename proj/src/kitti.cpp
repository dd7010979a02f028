#include "drivesense/kitti.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace drivesense {

bool KittiLabel::contains(const Point& p) const {
  const double c = std::cos(rotation_y);
  const double s = std::sin(rotation_y);
  const double dx = p.x - x;
  const double dy = p.y - y;
  const double dz = p.z - z;
  // into box frame
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  return std::abs(lx) <= 0.5 * length && std::abs(ly) <= 0.5 * width &&
         std::abs(dz) <= 0.5 * height;
}

std::vector<KittiLabel> parse_kitti_labels(std::string_view text) {
  std::vector<KittiLabel> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    KittiLabel label;
    double f[14];
    ls >> label.object_type;
    for (double& v : f) {
      if (!(ls >> v)) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 15 whitespace-separated fields");
      }
    }
    std::string extra;
    if (ls >> extra) {
      throw ParseError("line " + std::to_string(line_no) + ": trailing field '" + extra + "'");
    }
    label.truncated = f[0];
    label.occluded = f[1];
    label.alpha = f[2];
    for (int i = 0; i < 4; ++i) label.bbox2d[i] = f[3 + i];
    label.height = f[7];
    label.width = f[8];
    label.length = f[9];
    label.x = f[10];
    label.y = f[11];
    label.z = f[12];
    label.rotation_y = f[13];
    if (!(label.height > 0.0) || !(label.width > 0.0) || !(label.length > 0.0)) {
      throw SchemaError("line " + std::to_string(line_no) +
                        ": box dimensions must be strictly positive");
    }
    out.push_back(label);
  }
  return out;
}

std::string kitti_labels_to_text(const std::vector<KittiLabel>& labels) {
  std::ostringstream out;
  char buf[320];
  for (const KittiLabel& l : labels) {
    std::snprintf(buf, sizeof(buf),
                  "%s %.2f %.0f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f\n",
                  l.object_type.c_str(), l.truncated, l.occluded, l.alpha,
                  l.bbox2d[0], l.bbox2d[1], l.bbox2d[2], l.bbox2d[3], l.height,
                  l.width, l.length, l.x, l.y, l.z, l.rotation_y);
    out << buf;
  }
  return out.str();
}

std::vector<KittiLabel> decimate_labels(const std::vector<KittiLabel>& labels,
                                        const PointCloud& decimated,
                                        int min_points) {
  if (min_points < 1) throw std::invalid_argument("decimate_labels: min_points must be >= 1");
  std::vector<KittiLabel> out;
  for (const KittiLabel& label : labels) {
    std::string lower = label.object_type;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower != "car" && lower != "van" && lower != "truck") continue;
    int inside = 0;
    for (const Point& p : decimated.points) {
      if (label.contains(p) && ++inside >= min_points) break;
    }
    if (inside >= min_points) out.push_back(label);
  }
  return out;
}

}  // namespace drivesense
