#include "drivesense/scene.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace drivesense {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": bad numeric field '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<EgoSample> parse_dynamics(std::string_view text) {
  std::vector<EgoSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      const auto cols = split_fields(line);
      if (cols.size() < 2 || cols[0] != "timestamp_us" || cols[1] != "speed_mps") {
        throw SchemaError("line 1: expected header timestamp_us,speed_mps[,accel_mps2,steer_deg,throttle,brake]");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() < 2 || f.size() > 6) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2..6 fields");
    }
    EgoSample s;
    s.timestamp_us = static_cast<std::int64_t>(to_double(f[0], line_no));
    s.speed = to_double(f[1], line_no);
    if (s.speed < 0.0) {
      throw SchemaError("line " + std::to_string(line_no) + ": negative speed");
    }
    if (f.size() > 2 && !f[2].empty()) s.accel = to_double(f[2], line_no);
    if (f.size() > 3 && !f[3].empty()) s.steer_deg = to_double(f[3], line_no);
    if (f.size() > 4 && !f[4].empty()) {
      s.throttle = to_double(f[4], line_no);
      if (*s.throttle < 0.0 || *s.throttle > 1.0) {
        throw SchemaError("line " + std::to_string(line_no) + ": throttle outside [0, 1]");
      }
    }
    if (f.size() > 5 && !f[5].empty()) {
      s.brake = to_double(f[5], line_no);
      if (*s.brake < 0.0 || *s.brake > 1.0) {
        throw SchemaError("line " + std::to_string(line_no) + ": brake outside [0, 1]");
      }
    }
    out.push_back(s);
  }
  if (!header_seen) throw SchemaError("empty input: missing header row");
  std::stable_sort(out.begin(), out.end(), [](const EgoSample& a, const EgoSample& b) {
    return a.timestamp_us < b.timestamp_us;
  });
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].timestamp_us == out[i - 1].timestamp_us) {
      throw SchemaError("duplicate timestamp " + std::to_string(out[i].timestamp_us));
    }
  }
  return out;
}

namespace {

double interpolate(const std::vector<EgoSample>& series, std::int64_t t_us,
                   double (*value)(const EgoSample&), const char* what) {
  if (series.empty() || t_us < series.front().timestamp_us ||
      t_us > series.back().timestamp_us) {
    throw std::out_of_range(std::string("ego ") + what + ": query outside sampled span");
  }
  const auto it = std::lower_bound(
      series.begin(), series.end(), t_us,
      [](const EgoSample& s, std::int64_t t) { return s.timestamp_us < t; });
  if (it->timestamp_us == t_us) return value(*it);
  const EgoSample& hi = *it;
  const EgoSample& lo = *(it - 1);
  const double frac = static_cast<double>(t_us - lo.timestamp_us) /
                      static_cast<double>(hi.timestamp_us - lo.timestamp_us);
  return value(lo) + frac * (value(hi) - value(lo));
}

}  // namespace

double ego_speed_at(const std::vector<EgoSample>& series, std::int64_t t_us) {
  return interpolate(series, t_us, [](const EgoSample& s) { return s.speed; }, "speed");
}

double ego_accel_at(const std::vector<EgoSample>& series, std::int64_t t_us) {
  if (!dynamics_have_accel(series)) {
    throw std::out_of_range("ego accel: series has no acceleration column");
  }
  return interpolate(series, t_us, [](const EgoSample& s) { return *s.accel; }, "accel");
}

bool dynamics_have_accel(const std::vector<EgoSample>& series) {
  return !series.empty() &&
         std::all_of(series.begin(), series.end(),
                     [](const EgoSample& s) { return s.accel.has_value(); });
}

std::string to_string(Lane lane) {
  switch (lane) {
    case Lane::ego: return "ego";
    case Lane::left: return "left";
    case Lane::right: return "right";
    case Lane::outside: return "outside";
  }
  return "outside";
}

Lane assign_lane(const TrackedBox& box, const LaneConfig& lanes) {
  const double w = lanes.lane_width;
  const double cy = box.box.cy;
  if (std::abs(cy) <= 0.5 * w) return Lane::ego;
  if (lanes.num_side_lanes >= 1) {
    if (cy > 0.5 * w && cy <= 1.5 * w) return Lane::left;
    if (cy < -0.5 * w && cy >= -1.5 * w) return Lane::right;
  }
  return Lane::outside;
}

const LaneSummary& SceneSummary::lane(Lane l) const {
  switch (l) {
    case Lane::left: return left;
    case Lane::right: return right;
    default: return ego;
  }
}

SceneSummary summarize_scene(const std::vector<TrackedBox>& tracks,
                             const LaneConfig& lanes, double ego_speed,
                             double ego_length, std::int64_t timestamp_us) {
  (void)ego_speed;  // track velocities are already relative to the ego frame
  SceneSummary out;
  out.timestamp_us = timestamp_us;

  struct Slot {
    const TrackedBox* leader = nullptr;
    const TrackedBox* follower = nullptr;
  };
  Slot slots[3];  // left, ego, right
  auto slot_of = [&](Lane l) -> Slot* {
    switch (l) {
      case Lane::left: return &slots[0];
      case Lane::ego: return &slots[1];
      case Lane::right: return &slots[2];
      default: return nullptr;
    }
  };

  for (const TrackedBox& t : tracks) {
    Slot* slot = slot_of(assign_lane(t, lanes));
    if (!slot) continue;
    const double cx = t.box.cx;
    if (cx > 0.0) {
      if (!slot->leader || cx < slot->leader->box.cx ||
          (cx == slot->leader->box.cx && t.id < slot->leader->id)) {
        slot->leader = &t;
      }
    } else if (cx < 0.0) {
      if (!slot->follower || cx > slot->follower->box.cx ||
          (cx == slot->follower->box.cx && t.id < slot->follower->id)) {
        slot->follower = &t;
      }
    }
  }

  auto neighbor = [&](const TrackedBox* t, bool leader) -> std::optional<LaneNeighbor> {
    if (!t) return std::nullopt;
    LaneNeighbor n;
    n.track_id = t->id;
    n.gap_m = std::max(0.1, std::abs(t->box.cx) - 0.5 * (ego_length + t->box.l));
    // positive = closing: the leader gap shrinks when it drifts backward in
    // the ego frame, the follower gap when it drifts forward.
    n.rel_speed = leader ? -t->vx : t->vx;
    return n;
  };

  LaneSummary* lane_out[3] = {&out.left, &out.ego, &out.right};
  for (int i = 0; i < 3; ++i) {
    lane_out[i]->leader = neighbor(slots[i].leader, true);
    lane_out[i]->follower = neighbor(slots[i].follower, false);
  }
  return out;
}

}  // namespace drivesense
