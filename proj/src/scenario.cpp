#include "drivesense/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "drivesense/geometry.hpp"
#include "drivesense/wire.hpp"

namespace drivesense {

namespace {

SpeedProfile parse_speed_profile(const std::string& text) {
  // "0:15,20:10,40:25" -> breakpoints (t, speed)
  SpeedProfile profile;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    const auto colon = cur.find(':');
    if (colon == std::string::npos) {
      profile.breakpoints.emplace_back(0.0, std::stod(cur));
    } else {
      profile.breakpoints.emplace_back(std::stod(cur.substr(0, colon)),
                                       std::stod(cur.substr(colon + 1)));
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
  }
  flush();
  if (profile.breakpoints.empty()) {
    throw ConfigError("speed profile '" + text + "': no breakpoints");
  }
  for (size_t i = 1; i < profile.breakpoints.size(); ++i) {
    if (profile.breakpoints[i].first <= profile.breakpoints[i - 1].first) {
      throw ConfigError("speed profile '" + text + "': breakpoints must be increasing in t");
    }
  }
  return profile;
}

struct WorldState {
  double ego_x = 0.0;
  double ego_v = 0.0;
  double ego_a = 0.0;  // model acceleration at the sample instant
};

// Nearest same-lane vehicle ahead of the ego, if any.
const VehicleSpec* lead_vehicle(const ScenarioSpec& spec, double t, double ego_x,
                                double* gap_out, double* dv_out, double ego_v) {
  const VehicleSpec* lead = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const VehicleSpec& v : spec.vehicles) {
    if (std::abs(v.lane_offset_m) > 0.5 * (spec.ego.width + v.width)) continue;
    const double x = v.init_pos_m + v.speed.position_at(t);
    const double gap = x - ego_x - 0.5 * (spec.ego.length + v.length);
    if (x > ego_x && gap < best_gap) {
      best_gap = gap;
      lead = &v;
    }
  }
  if (lead) {
    *gap_out = best_gap;
    *dv_out = ego_v - lead->speed.speed_at(t);
  }
  return lead;
}

double ego_accel_model(const ScenarioSpec& spec, double t, double ego_x, double ego_v) {
  if (!spec.ego.idm_driven) return 0.0;
  const double v = std::max(ego_v, 0.0);
  double gap = 0.0, dv = 0.0;
  if (lead_vehicle(spec, t, ego_x, &gap, &dv, v)) {
    if (gap <= 0.0) {
      throw SimulationError("scenario: ego collided with its leader", 0);
    }
    return idm_accel(spec.ego.idm, v, gap, dv);
  }
  return idm_accel(spec.ego.idm, v, 1e9, 0.0);  // free road
}

// One RK4 step of the ego state.
void ego_step(const ScenarioSpec& spec, double t, double dt, WorldState& st) {
  if (!spec.ego.idm_driven) {
    st.ego_x += spec.ego.scripted.position_at(t + dt) - spec.ego.scripted.position_at(t);
    st.ego_v = spec.ego.scripted.speed_at(t + dt);
    return;
  }
  auto deriv = [&](double tt, double x, double v) {
    double acc = ego_accel_model(spec, tt, x, v);
    if (v <= 0.0 && acc < 0.0) acc = 0.0;
    return std::pair<double, double>(std::max(v, 0.0), acc);
  };
  const auto [k1x, k1v] = deriv(t, st.ego_x, st.ego_v);
  const auto [k2x, k2v] = deriv(t + 0.5 * dt, st.ego_x + 0.5 * dt * k1x, st.ego_v + 0.5 * dt * k1v);
  const auto [k3x, k3v] = deriv(t + 0.5 * dt, st.ego_x + 0.5 * dt * k2x, st.ego_v + 0.5 * dt * k2v);
  const auto [k4x, k4v] = deriv(t + dt, st.ego_x + dt * k3x, st.ego_v + dt * k3v);
  st.ego_x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  st.ego_v = std::max(0.0, st.ego_v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v));
}

struct Aabb {
  double x0, x1, y0, y1, z0, z1;
};

// Slab-method ray/box intersection; returns the entry range or infinity.
double ray_box(const Aabb& box, double dx, double dy, double dz) {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const double o[3] = {0.0, 0.0, 0.0};
  const double d[3] = {dx, dy, dz};
  const double lo[3] = {box.x0, box.y0, box.z0};
  const double hi[3] = {box.x1, box.y1, box.z1};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-12) {
      if (o[i] < lo[i] || o[i] > hi[i]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double ta = (lo[i] - o[i]) / d[i];
    double tb = (hi[i] - o[i]) / d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::numeric_limits<double>::infinity();
  }
  return t0 > 1e-9 ? t0 : std::numeric_limits<double>::infinity();
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

ScenarioSpec scenario_from_config(const KeyValueConfig& cfg) {
  ScenarioSpec spec;
  spec.frame_count = static_cast<int>(cfg.get_int("scenario.frames", spec.frame_count));
  spec.fps = cfg.get_double("scenario.fps", spec.fps);
  spec.seed = static_cast<std::uint64_t>(cfg.get_int("scenario.seed", static_cast<std::int64_t>(spec.seed)));
  spec.ground_plane = cfg.get_bool("scenario.ground_plane", spec.ground_plane);
  spec.sensor = profile_by_name(cfg.get_string("scenario.sensor", "puck"));
  spec.sensor_height_m = cfg.get_double("scenario.sensor_height_m", spec.sensor_height_m);
  spec.max_range_m = cfg.get_double("scenario.max_range_m", spec.max_range_m);
  spec.azimuth_step_deg = cfg.get_double("scenario.azimuth_step_deg", spec.azimuth_step_deg);
  spec.range_noise_sigma_m = cfg.get_double("scenario.range_noise_sigma_m", spec.range_noise_sigma_m);

  spec.ego.idm_driven = cfg.get_bool("ego.idm", spec.ego.idm_driven);
  spec.ego.init_speed = cfg.get_double("ego.init_speed", spec.ego.init_speed);
  spec.ego.length = cfg.get_double("ego.length", spec.ego.length);
  spec.ego.width = cfg.get_double("ego.width", spec.ego.width);
  spec.ego.idm.s0 = cfg.get_double("ego.s0", spec.ego.idm.s0);
  spec.ego.idm.v0 = cfg.get_double("ego.v0", spec.ego.idm.v0);
  spec.ego.idm.T = cfg.get_double("ego.T", spec.ego.idm.T);
  spec.ego.idm.a = cfg.get_double("ego.a", spec.ego.idm.a);
  spec.ego.idm.b = cfg.get_double("ego.b", spec.ego.idm.b);
  if (cfg.has("ego.speed")) spec.ego.scripted = parse_speed_profile(cfg.require_string("ego.speed"));

  for (int i = 1;; ++i) {
    const std::string prefix = "vehicle." + std::to_string(i) + ".";
    if (!cfg.has(prefix + "speed") && !cfg.has(prefix + "init_pos")) break;
    VehicleSpec v;
    v.name = "vehicle" + std::to_string(i);
    v.lane_offset_m = cfg.get_double(prefix + "lane_offset", v.lane_offset_m);
    v.init_pos_m = cfg.get_double(prefix + "init_pos", v.init_pos_m);
    v.length = cfg.get_double(prefix + "length", v.length);
    v.width = cfg.get_double(prefix + "width", v.width);
    v.height = cfg.get_double(prefix + "height", v.height);
    v.cls = object_class_from_string(cfg.get_string(prefix + "class", "car"));
    if (cfg.has(prefix + "speed")) v.speed = parse_speed_profile(cfg.require_string(prefix + "speed"));
    spec.vehicles.push_back(std::move(v));
  }
  return spec;
}

GeneratedScenario generate_scenario(const ScenarioSpec& spec) {
  if (spec.frame_count < 0) throw ConfigError("scenario: negative frame count");
  if (!(spec.fps > 0.0)) throw ConfigError("scenario: fps must be > 0");
  spec.sensor.validate();

  GeneratedScenario out;
  out.spec = spec;
  out.has_idm_truth = spec.ego.idm_driven;
  out.idm_truth = spec.ego.idm;

  const double frame_dt = 1.0 / spec.fps;
  const int substeps = std::max(1, static_cast<int>(std::ceil(frame_dt / 0.01)));
  const double dt = frame_dt / substeps;

  WorldState st;
  st.ego_v = spec.ego.idm_driven ? spec.ego.init_speed : spec.ego.scripted.speed_at(0.0);

  std::vector<double> azimuths;
  for (double a = 0.0; a < 360.0 - 1e-9; a += spec.azimuth_step_deg) {
    azimuths.push_back(a * M_PI / 180.0);
  }

  for (int k = 0; k < spec.frame_count; ++k) {
    const double t = k * frame_dt;
    const std::int64_t t_us = 1'000'000 + static_cast<std::int64_t>(std::llround(t * 1e6));
    const std::string frame_id = "frame_" + std::to_string(k);

    // Relative boxes and collision check for this instant.
    struct RelBox {
      const VehicleSpec* spec;
      double cx, cy, vx;
    };
    std::vector<RelBox> rel;
    for (const VehicleSpec& v : spec.vehicles) {
      const double x = v.init_pos_m + v.speed.position_at(t);
      rel.push_back({&v, x - st.ego_x, v.lane_offset_m, v.speed.speed_at(t) - st.ego_v});
    }
    for (size_t i = 0; i < rel.size(); ++i) {
      const OrientedBox bi{rel[i].cx, rel[i].cy, rel[i].spec->width, rel[i].spec->length, 0.0};
      for (size_t j = i + 1; j < rel.size(); ++j) {
        const OrientedBox bj{rel[j].cx, rel[j].cy, rel[j].spec->width, rel[j].spec->length, 0.0};
        if (intersection_area(bi, bj) > 1e-9) {
          throw ConfigError("scenario: vehicles '" + rel[i].spec->name + "' and '" +
                            rel[j].spec->name + "' collide at frame " + std::to_string(k));
        }
      }
      const OrientedBox ego_box{0.0, 0.0, spec.ego.width, spec.ego.length, 0.0};
      if (intersection_area(bi, ego_box) > 1e-9) {
        throw SimulationError("scenario: ego collides with '" + rel[i].spec->name +
                              "' at frame " + std::to_string(k), k);
      }
    }

    // Ground truth frame.
    TrackedFrame truth;
    truth.frame_id = frame_id;
    truth.timestamp_us = t_us;
    for (size_t i = 0; i < rel.size(); ++i) {
      TrackedBox b;
      b.box = {rel[i].cx, rel[i].cy, rel[i].spec->width, rel[i].spec->length, 0.0};
      b.cls = rel[i].spec->cls;
      b.score = 1.0;
      b.id = static_cast<std::int64_t>(i + 1);
      b.vx = rel[i].vx;
      b.vy = 0.0;
      b.status = TrackStatus::confirmed;
      truth.boxes.push_back(b);
    }
    out.truth.push_back(truth);

    // Dynamics sample (acceleration from the driving model at this instant).
    st.ego_a = ego_accel_model(spec, t, st.ego_x, st.ego_v);
    EgoSample dyn;
    dyn.timestamp_us = t_us;
    dyn.speed = st.ego_v;
    dyn.accel = st.ego_a;
    dyn.steer_deg = 0.0;
    if (spec.ego.idm_driven) {
      dyn.throttle = std::clamp(st.ego_a / spec.ego.idm.a, 0.0, 1.0);
      dyn.brake = std::clamp(-st.ego_a / spec.ego.idm.b, 0.0, 1.0);
    }
    out.dynamics.push_back(dyn);

    // Point cloud: cast every (channel, azimuth) beam against the boxes.
    PointCloud cloud;
    cloud.frame_id = frame_id;
    cloud.timestamp_us = t_us;
    std::mt19937_64 rng(mix(mix(0x8f2a31cd0b17e44dULL, spec.seed), static_cast<std::uint64_t>(k)));
    std::normal_distribution<double> range_noise(0.0, spec.range_noise_sigma_m);

    std::vector<Aabb> boxes;
    for (const RelBox& r : rel) {
      boxes.push_back({r.cx - 0.5 * r.spec->length, r.cx + 0.5 * r.spec->length,
                       r.cy - 0.5 * r.spec->width, r.cy + 0.5 * r.spec->width,
                       -spec.sensor_height_m, -spec.sensor_height_m + r.spec->height});
    }

    for (size_t ch = 0; ch < spec.sensor.channel_angles_deg.size(); ++ch) {
      const double elev = spec.sensor.channel_angles_deg[ch] * M_PI / 180.0;
      const double ce = std::cos(elev);
      const double se = std::sin(elev);
      for (double az : azimuths) {
        const double dx = ce * std::cos(az);
        const double dy = ce * std::sin(az);
        const double dz = se;
        double best = std::numeric_limits<double>::infinity();
        bool hit_vehicle = false;
        for (const Aabb& box : boxes) {
          const double r = ray_box(box, dx, dy, dz);
          if (r < best) {
            best = r;
            hit_vehicle = true;
          }
        }
        if (spec.ground_plane && dz < -1e-9) {
          const double rg = -spec.sensor_height_m / dz;
          if (rg < best) {
            best = rg;
            hit_vehicle = false;
          }
        }
        if (!std::isfinite(best) || best > spec.max_range_m) continue;
        double range = best;
        if (spec.range_noise_sigma_m > 0.0) range += range_noise(rng);
        Point p;
        p.x = range * dx;
        p.y = range * dy;
        p.z = range * dz;
        p.intensity = hit_vehicle ? spec.vehicle_intensity : spec.ground_intensity;
        p.ring = static_cast<int>(ch);
        p.vertical_angle_deg = spec.sensor.channel_angles_deg[ch];
        cloud.points.push_back(p);
      }
    }
    out.frames.push_back(std::move(cloud));

    for (int s = 0; s < substeps; ++s) ego_step(spec, t + s * dt, dt, st);
  }

  // Synthetic stress trace: low-passed braking/closing effort plus a small
  // seeded jitter, sampled at the frame rate.
  std::mt19937_64 rng(mix(0x3c6ef372fe94f82bULL, spec.seed));
  std::normal_distribution<double> jitter(0.0, 0.01);
  double level = 0.3;
  for (size_t k = 0; k < out.dynamics.size(); ++k) {
    const double effort = std::min(1.0, std::abs(out.dynamics[k].accel.value_or(0.0)));
    level += 0.25 * (0.3 + 0.6 * effort - level);
    out.physiology.timestamps_us.push_back(out.dynamics[k].timestamp_us);
    out.physiology.values.push_back(std::clamp(level + jitter(rng), 0.0, 1.0));
  }
  return out;
}

void write_scenario(const GeneratedScenario& scenario, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "frames");

  std::ofstream manifest(fs::path(out_dir) / "frames.csv");
  manifest << "frame_id,timestamp_us,path\n";
  char name[64];
  for (size_t k = 0; k < scenario.frames.size(); ++k) {
    std::snprintf(name, sizeof(name), "frames/frame_%06zu.csv", k);
    std::ofstream f(fs::path(out_dir) / name);
    f << cloud_to_csv(scenario.frames[k]);
    manifest << scenario.frames[k].frame_id << "," << scenario.frames[k].timestamp_us
             << "," << name << "\n";
  }

  {
    std::ofstream dyn(fs::path(out_dir) / "dynamics.csv");
    dyn << "timestamp_us,speed_mps,accel_mps2,steer_deg,throttle,brake\n";
    char buf[200];
    for (const EgoSample& s : scenario.dynamics) {
      std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                    static_cast<long long>(s.timestamp_us), s.speed,
                    s.accel.value_or(0.0), s.steer_deg.value_or(0.0),
                    s.throttle.value_or(0.0), s.brake.value_or(0.0));
      dyn << buf;
    }
  }

  {
    std::ofstream truth(fs::path(out_dir) / "truth_tracks.jsonl");
    for (const TrackedFrame& f : scenario.truth) {
      truth << tracked_frame_to_json(f).dump() << "\n";
    }
  }

  {
    std::ofstream phys(fs::path(out_dir) / "physiology.csv");
    phys << signal_to_csv(scenario.physiology);
  }

  if (scenario.has_idm_truth) {
    std::ofstream params(fs::path(out_dir) / "truth_params.txt");
    char buf[200];
    std::snprintf(buf, sizeof(buf), "s0=%.9g\nv0=%.9g\nT=%.9g\na=%.9g\nb=%.9g\n",
                  scenario.idm_truth.s0, scenario.idm_truth.v0, scenario.idm_truth.T,
                  scenario.idm_truth.a, scenario.idm_truth.b);
    params << buf;
  }
}

}  // namespace drivesense
