#include "drivesense/geometry.hpp"

#include <algorithm>

namespace drivesense {

std::string to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::car: return "car";
    case ObjectClass::van: return "van";
    case ObjectClass::truck: return "truck";
  }
  return "car";
}

ObjectClass object_class_from_string(const std::string& s) {
  if (s == "car") return ObjectClass::car;
  if (s == "van") return ObjectClass::van;
  if (s == "truck") return ObjectClass::truck;
  throw SchemaError("unknown object class: '" + s + "'");
}

std::string to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::tentative: return "tentative";
    case TrackStatus::confirmed: return "confirmed";
    case TrackStatus::dead: return "dead";
  }
  return "confirmed";
}

TrackStatus track_status_from_string(const std::string& s) {
  if (s == "tentative") return TrackStatus::tentative;
  if (s == "confirmed") return TrackStatus::confirmed;
  if (s == "dead") return TrackStatus::dead;
  throw SchemaError("unknown track status: '" + s + "'");
}

std::array<std::array<double, 2>, 4> OrientedBox::corners() const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double hl = 0.5 * l;
  const double hw = 0.5 * w;
  // CCW order: front-left, rear-left, rear-right, front-right.
  const double local[4][2] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  std::array<std::array<double, 2>, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i][0] = cx + c * local[i][0] - s * local[i][1];
    out[i][1] = cy + s * local[i][0] + c * local[i][1];
  }
  return out;
}

namespace {

using Poly = std::vector<std::array<double, 2>>;

double polygon_area(const Poly& p) {
  if (p.size() < 3) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    acc += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::abs(acc);
}

// Sutherland-Hodgman clip of a convex polygon against the half-plane on the
// left of edge a->b.
Poly clip_edge(const Poly& poly, const std::array<double, 2>& a,
               const std::array<double, 2>& b) {
  Poly out;
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  auto side = [&](const std::array<double, 2>& p) {
    return ex * (p[1] - a[1]) - ey * (p[0] - a[0]);
  };
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& cur = poly[i];
    const auto& nxt = poly[(i + 1) % n];
    const double sc = side(cur);
    const double sn = side(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
    }
  }
  return out;
}

}  // namespace

double intersection_area(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  Poly poly(ca.begin(), ca.end());
  for (int i = 0; i < 4 && !poly.empty(); ++i) {
    poly = clip_edge(poly, cb[i], cb[(i + 1) % 4]);
  }
  return polygon_area(poly);
}

double iou_oriented(const OrientedBox& a, const OrientedBox& b) {
  if (!(a.area() > 0.0) || !(b.area() > 0.0)) {
    throw std::domain_error("iou_oriented: degenerate zero-area box");
  }
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace drivesense
