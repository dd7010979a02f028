// Acceptance suite: one check per release criterion, each printed as a
// single [PASS]/[FAIL] line with its runtime.
#include <httplib.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "drivesense/detector.hpp"
#include "drivesense/geometry.hpp"
#include "drivesense/idm.hpp"
#include "drivesense/pipeline.hpp"
#include "drivesense/pointcloud.hpp"
#include "drivesense/scenario.hpp"
#include "drivesense/services.hpp"
#include "drivesense/signal.hpp"
#include "drivesense/tracking.hpp"

using namespace drivesense;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CheckFailure(what);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Profile intersection count

void check_profile_intersection() {
  const auto matched = intersect_profiles(hdl64e_profile(), puck_profile());
  require(matched.size() == 9,
          "expected 9 matched channels, got " + std::to_string(matched.size()));
}

// ---------------------------------------------------------------------------
// 2. Full-azimuth equivariance over 50 random scenes

void check_azimuthal_equivariance() {
  std::mt19937 rng(20240807);
  std::uniform_real_distribution<double> jitter(-1.5, 1.5), yaw(-M_PI, M_PI),
      score(0.2, 1.0), coord(-30, 30), z(-1.5, 1.0);
  GridConfig grid;  // default 608 cells over 40 m -> cell 0.1316 m
  const double cell = grid.cell_size();

  for (int scene = 0; scene < 50; ++scene) {
    // separated slots keep distinct objects from consolidating
    const double slots[8][2] = {{12, 8},   {-15, -10}, {25, -20}, {-28, 15},
                                {8, -25},  {-9, 26},   {20, 20},  {-22, -27}};
    std::vector<Detection> truth;
    const int n = 3 + scene % 6;
    for (int i = 0; i < n; ++i) {
      Detection d;
      d.box = {slots[i][0] + jitter(rng), slots[i][1] + jitter(rng), 1.8, 4.5, yaw(rng)};
      d.score = score(rng);
      truth.push_back(d);
    }
    std::vector<Detection> truth_rot;
    for (const Detection& d : truth) truth_rot.push_back(rotate_detection(d, M_PI));

    OracleDetector oracle;
    oracle.set_truth("s", truth);
    oracle.set_truth("s_rot", truth_rot);

    PointCloud cloud;
    cloud.frame_id = "s";
    cloud.timestamp_us = 1'000'000;
    for (int i = 0; i < 400; ++i) {
      cloud.points.push_back(Point{coord(rng), coord(rng), z(rng), 100, 0, 0});
    }
    PointCloud cloud_rot = rotate_z(cloud, M_PI);
    cloud_rot.frame_id = "s_rot";

    FullAzimuthConfig cfg;
    cfg.grid = grid;
    const auto base = detect_full_azimuth(cloud, oracle, cfg);
    const auto rot = detect_full_azimuth(cloud_rot, oracle, cfg);

    require(base.size() == truth.size(),
            "scene " + std::to_string(scene) + ": missing/extra detections in base pass");
    require(rot.size() == truth.size(),
            "scene " + std::to_string(scene) + ": missing/extra detections in rotated pass");

    for (const Detection& d : base) {
      const Detection expect = rotate_detection(d, M_PI);
      double best = 1e30;
      const Detection* hit = nullptr;
      for (const Detection& got : rot) {
        const double err = std::hypot(got.box.cx - expect.box.cx,
                                      got.box.cy - expect.box.cy);
        if (err < best) {
          best = err;
          hit = &got;
        }
      }
      require(hit != nullptr && best <= cell, "rotated detection off by " + fmt(best));
      require(std::abs(hit->box.w - expect.box.w) <= cell &&
                  std::abs(hit->box.l - expect.box.l) <= cell &&
                  std::abs(normalize_angle(hit->box.yaw - expect.box.yaw)) <= cell,
              "rotated detection box-parameter mismatch above one cell");
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Oriented IoU vs oracles

void check_oriented_iou() {
  std::mt19937 rng(77001);
  std::uniform_real_distribution<double> pos(-5, 5), size(0.5, 6), yaw(-M_PI, M_PI),
      offset(-4, 4), unit(0, 1), shift(-10, 10);

  auto mc_oracle = [&](const OrientedBox& a, const OrientedBox& b, int samples) {
    double x0 = 1e30, x1 = -1e30, y0 = 1e30, y1 = -1e30;
    for (const OrientedBox* box : {&a, &b}) {
      for (const auto& c : box->corners()) {
        x0 = std::min(x0, c[0]);
        x1 = std::max(x1, c[0]);
        y0 = std::min(y0, c[1]);
        y1 = std::max(y1, c[1]);
      }
    }
    auto inside = [](const OrientedBox& box, double px, double py) {
      const double c = std::cos(box.yaw), s = std::sin(box.yaw);
      const double dx = px - box.cx, dy = py - box.cy;
      return std::abs(c * dx + s * dy) <= 0.5 * box.l &&
             std::abs(-s * dx + c * dy) <= 0.5 * box.w;
    };
    std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
    long long both = 0, either = 0;
    for (int i = 0; i < samples; ++i) {
      const double px = ux(rng), py = uy(rng);
      const bool ia = inside(a, px, py), ib = inside(b, px, py);
      both += ia && ib;
      either += ia || ib;
    }
    return either ? static_cast<double>(both) / either : 0.0;
  };

  // 100 Monte-Carlo-validated rotated pairs
  for (int i = 0; i < 100; ++i) {
    OrientedBox a{pos(rng), pos(rng), size(rng), size(rng), yaw(rng)};
    OrientedBox b{a.cx + offset(rng), a.cy + offset(rng), size(rng), size(rng), yaw(rng)};
    const double got = iou_oriented(a, b);
    const double expect = mc_oracle(a, b, 1'000'000);
    require(std::abs(got - expect) <= 2e-3,
            "MC pair " + std::to_string(i) + ": |" + fmt(got) + " - " + fmt(expect) + "| > 2e-3");
  }

  // 900 analytic cases: an axis-aligned pair with the exact rectangle-overlap
  // IoU, then both boxes moved by one rigid transform
  for (int i = 0; i < 900; ++i) {
    const OrientedBox a{pos(rng), pos(rng), size(rng), size(rng), 0.0};
    const OrientedBox b{a.cx + offset(rng), a.cy + offset(rng), size(rng), size(rng), 0.0};
    const double ox = std::max(0.0, std::min(a.cx + a.l / 2, b.cx + b.l / 2) -
                                        std::max(a.cx - a.l / 2, b.cx - b.l / 2));
    const double oy = std::max(0.0, std::min(a.cy + a.w / 2, b.cy + b.w / 2) -
                                        std::max(a.cy - a.w / 2, b.cy - b.w / 2));
    const double inter = ox * oy;
    const double expect = inter / (a.area() + b.area() - inter);

    const double th = yaw(rng), tx = shift(rng), ty = shift(rng);
    auto rigid = [&](const OrientedBox& box) {
      OrientedBox out = box;
      out.cx = std::cos(th) * box.cx - std::sin(th) * box.cy + tx;
      out.cy = std::sin(th) * box.cx + std::cos(th) * box.cy + ty;
      out.yaw = normalize_angle(box.yaw + th);
      return out;
    };
    const OrientedBox ra = rigid(a), rb = rigid(b);
    const double got = iou_oriented(ra, rb);
    require(std::abs(got - expect) <= 2e-3, "analytic pair off by " + fmt(got - expect));
    // symmetry and rigid invariance at 1e-9
    require(std::abs(iou_oriented(rb, ra) - got) <= 1e-9, "asymmetry above 1e-9");
    require(std::abs(got - iou_oriented(a, b)) <= 1e-9,
            "rigid-transform variance above 1e-9");
  }
}

// ---------------------------------------------------------------------------
// 4. Tracking lifecycle behaviors

DetectionFrame frame_of(std::int64_t t_us, std::vector<Detection> dets) {
  DetectionFrame f;
  f.frame_id = "f";
  f.timestamp_us = t_us;
  f.boxes = std::move(dets);
  return f;
}

Detection car_at(double cx, double cy) {
  return Detection{{cx, cy, 1.8, 4.5, 0.0}, ObjectClass::car, 0.9};
}

void check_tracking_behaviors() {
  // (a) 2-frame flicker never emitted with confirm_hits = 3
  {
    TrackerConfig cfg;
    cfg.confirm_hits = 3;
    Tracker tracker(cfg);
    bool emitted = false;
    for (int k = 0; k < 12; ++k) {
      std::vector<Detection> dets;
      if (k < 2) dets.push_back(car_at(10, 0));
      emitted |= !tracker.update_frame(frame_of(1'000'000 + k * 100'000, dets)).boxes.empty();
    }
    require(!emitted, "flicker object was emitted");
  }

  // (b) occluded confirmed object: imputed boxes, same id on reacquisition
  {
    TrackerConfig cfg;
    cfg.confirm_hits = 3;
    cfg.max_misses = 5;
    Tracker tracker(cfg);
    TrackedFrame out;
    for (int k = 0; k < 6; ++k) {
      out = tracker.update_frame(frame_of(1'000'000 + k * 100'000, {car_at(10 + k, 0)}));
    }
    require(out.boxes.size() == 1, "object not confirmed before occlusion");
    const std::int64_t id = out.boxes[0].id;
    for (int k = 0; k < 3; ++k) {
      out = tracker.update_frame(frame_of(1'600'000 + k * 100'000, {}));
      require(out.boxes.size() == 1, "no imputed box during occlusion");
      require(out.boxes[0].id == id, "imputed box changed id");
    }
    out = tracker.update_frame(frame_of(1'900'000, {car_at(19, 0)}));
    require(out.boxes.size() == 1 && out.boxes[0].id == id,
            "id not preserved across occlusion");
  }

  // (c) 5 noisy well-separated objects, 100 frames, zero id switches
  {
    TrackerConfig cfg;
    cfg.confirm_hits = 3;
    Tracker tracker(cfg);
    std::mt19937 rng(99);
    std::normal_distribution<double> noise(0.0, 0.3);
    const double base_x[5] = {10, 25, -12, -30, 18};
    const double base_y[5] = {0, 3.5, -3.5, 0, -7};
    const double vel[5] = {2.0, -1.0, 1.5, 0.0, -2.0};
    std::map<int, std::int64_t> identity;
    for (int k = 0; k < 100; ++k) {
      std::vector<Detection> dets;
      for (int i = 0; i < 5; ++i) {
        dets.push_back(car_at(base_x[i] + vel[i] * 0.1 * k + noise(rng),
                              base_y[i] + noise(rng)));
      }
      const auto out = tracker.update_frame(frame_of(1'000'000 + k * 100'000, dets));
      if (k < 5) continue;
      require(out.boxes.size() == 5, "lost a track at frame " + std::to_string(k));
      for (int i = 0; i < 5; ++i) {
        const double tx = base_x[i] + vel[i] * 0.1 * k;
        double best = 1e30;
        std::int64_t best_id = -1;
        for (const TrackedBox& b : out.boxes) {
          const double d = std::hypot(b.box.cx - tx, b.box.cy - base_y[i]);
          if (d < best) {
            best = d;
            best_id = b.id;
          }
        }
        auto it = identity.find(i);
        if (it == identity.end()) identity[i] = best_id;
        else require(it->second == best_id, "identity switch at frame " + std::to_string(k));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 5. Kalman numerics

void check_kalman_numerics() {
  TrackerConfig cfg;
  std::mt19937 rng(512);
  std::normal_distribution<double> noise(0.0, 0.3);

  Track t;
  t.id = 1;
  t.state.mean << 0.3, -0.1, 0, 0;
  t.state.covariance = Eigen::Matrix4d::Zero();
  t.state.covariance(0, 0) = t.state.covariance(1, 1) = 0.09;
  t.state.covariance(2, 2) = t.state.covariance(3, 3) = 100.0;
  t.w = 1.8;
  t.l = 4.5;

  const double vx = 2.0, vy = -0.5, dt = 0.1;
  double steady_sq = 0.0;
  int steady_n = 0;
  for (int k = 1; k <= 50; ++k) {
    const double truth_x = vx * dt * k;
    const double truth_y = vy * dt * k;
    t = predict(t, dt, cfg);
    t = correct(t, car_at(truth_x + noise(rng), truth_y + noise(rng)), cfg);

    const Eigen::Matrix4d& p = t.state.covariance;
    require((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-9,
            "covariance asymmetry above 1e-9");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(p);
    require(es.eigenvalues().minCoeff() >= -1e-9, "covariance not PSD");

    if (k > 30) {
      const double ex = t.state.mean[0] - truth_x;
      const double ey = t.state.mean[1] - truth_y;
      steady_sq += ex * ex + ey * ey;
      ++steady_n;
    }
  }
  const double rmse = std::sqrt(steady_sq / steady_n);
  require(rmse < 0.3, "steady-state position RMSE " + fmt(rmse) + " >= 0.3");
  const double verr = std::hypot(t.state.mean[2] - vx, t.state.mean[3] - vy);
  require(verr < 0.2, "velocity error " + fmt(verr) + " >= 0.2");
}

// ---------------------------------------------------------------------------
// 6. IDM round trip

void check_idm_roundtrip() {
  const IdmParams truth{2.0, 30.0, 1.5, 1.0, 2.0, 4.0};
  const SpeedProfile leader{{{0.0, 25.0}, {40.0, 10.0}, {80.0, 20.0}}};
  const auto clean = simulate_follower(truth, leader, {5.0, 50.0}, 0.1, 1200);

  auto check_within = [&](const IdmParams& got, double tol, const char* what) {
    const double rel[5] = {std::abs(got.s0 - truth.s0) / truth.s0,
                           std::abs(got.v0 - truth.v0) / truth.v0,
                           std::abs(got.T - truth.T) / truth.T,
                           std::abs(got.a - truth.a) / truth.a,
                           std::abs(got.b - truth.b) / truth.b};
    for (double r : rel) {
      require(r < tol, std::string(what) + ": parameter off by " + fmt(100 * r) + "%");
    }
  };

  check_within(fit_idm(clean, IdmBounds{}).params, 0.05, "noiseless fit");

  auto noisy = clean;
  std::mt19937 rng(424242);
  std::normal_distribution<double> accel_noise(0.0, 0.05);
  for (FollowSample& s : noisy) s.a_obs += accel_noise(rng);
  check_within(fit_idm(noisy, IdmBounds{}).params, 0.15, "noisy fit");
}

// ---------------------------------------------------------------------------
// 7. PCC sanity and window arithmetic

void check_pcc() {
  std::mt19937 rng(31415);
  std::normal_distribution<double> n(0, 1);

  SignalSeries x, pos, neg;
  for (int i = 0; i < 100; ++i) {
    const double v = n(rng);
    x.timestamps_us.push_back(i * 500'000);
    x.values.push_back(v);
    pos.timestamps_us.push_back(i * 500'000);
    pos.values.push_back(2.0 * v + 1.0);
    neg.timestamps_us.push_back(i * 500'000);
    neg.values.push_back(-v);
  }
  require(std::abs(pearson(x, pos, x.t_min(), x.t_max(), 2.0) - 1.0) <= 1e-9,
          "affine series: r != 1");
  require(std::abs(pearson(x, neg, x.t_min(), x.t_max(), 2.0) + 1.0) <= 1e-9,
          "negated series: r != -1");

  SignalSeries a, b;
  for (int i = 0; i < 1000; ++i) {
    a.timestamps_us.push_back(i * 100'000);
    a.values.push_back(n(rng));
    b.timestamps_us.push_back(i * 100'000);
    b.values.push_back(n(rng));
  }
  const double r = pearson(a, b, a.t_min(), a.t_max(), 10.0);
  require(std::abs(r) < 0.1, "independent noise correlated: |r| = " + fmt(std::abs(r)));

  // 40 s span, 10 s windows, 5 s stride -> exactly 7 windows
  const IdmParams p{2.0, 30.0, 1.5, 1.0, 2.0, 4.0};
  std::vector<FollowSample> samples;
  for (int i = 0; i <= 400; ++i) {
    FollowSample s;
    s.timestamp_us = 1'000'000 + i * 100'000;
    s.v = 15.0 + std::sin(i * 0.05);
    s.s = 25.0 + 2.0 * std::cos(i * 0.03);
    s.dv = std::sin(i * 0.02);
    s.a_obs = idm_accel(p, s.v, s.s, s.dv);
    samples.push_back(s);
  }
  const ParamSeries series = sliding_estimation(samples, 10.0, 5.0, IdmBounds{});
  const size_t total = series.windows.size() + series.skipped.size();
  require(total == 7, "expected 7 windows, got " + std::to_string(total));
}

// ---------------------------------------------------------------------------
// 8. End-to-end pipeline on a synthetic scenario

ScenarioSpec e2e_scenario() {
  ScenarioSpec spec;
  spec.frame_count = 100;
  spec.fps = 2.0;  // 50 s of driving
  spec.seed = 8;
  spec.ego.idm_driven = true;
  spec.ego.idm = {2.0, 18.0, 1.5, 1.5, 2.0, 4.0};
  spec.ego.init_speed = 6.0;

  VehicleSpec leader;
  leader.init_pos_m = 30.0;
  SpeedProfile sp;
  sp.breakpoints.push_back({0.0, 16.0});
  for (int i = 0; i <= 10; ++i) sp.breakpoints.push_back({15.0 + i, 16.0 - i});  // down to 6
  for (int i = 1; i <= 8; ++i) sp.breakpoints.push_back({35.0 + i, 6.0 + i});    // up to 14
  leader.speed = sp;
  spec.vehicles.push_back(leader);

  VehicleSpec oncoming;
  oncoming.lane_offset_m = 3.5;
  oncoming.init_pos_m = -40.0;
  oncoming.speed = SpeedProfile{{{0.0, 17.0}}};
  spec.vehicles.push_back(oncoming);
  return spec;
}

void check_end_to_end(std::ostream& log) {
  const fs::path data = fs::temp_directory_path() / "ds_accept_data";
  const fs::path out_a = fs::temp_directory_path() / "ds_accept_out_a";
  const fs::path out_b = fs::temp_directory_path() / "ds_accept_out_b";
  fs::remove_all(data);
  fs::remove_all(out_a);
  fs::remove_all(out_b);

  write_scenario(generate_scenario(e2e_scenario()), data.string());

  PipelineConfig cfg;
  cfg.frames_manifest = (data / "frames.csv").string();
  cfg.dynamics_path = (data / "dynamics.csv").string();
  cfg.physiology_path = (data / "physiology.csv").string();
  cfg.truth_tracks_path = (data / "truth_tracks.jsonl").string();
  cfg.truth_params_path = (data / "truth_params.txt").string();
  cfg.idm_window_s = 20.0;
  cfg.idm_stride_s = 10.0;
  cfg.out_dir = out_a.string();
  const RunReport report = run_pipeline(cfg);

  require(report.frames_processed == 100, "not all frames processed");
  require(report.dropped.empty(), "frames dropped");
  require(report.has_tracking_eval, "tracking eval missing");
  log << "rmse=" << fmt(report.tracking_eval.position_rmse_m) << "m ";
  require(report.tracking_eval.position_rmse_m < 0.2,
          "tracked-position RMSE " + fmt(report.tracking_eval.position_rmse_m) + " >= 0.2");
  require(report.has_idm_eval, "IDM eval missing");
  log << "idm_err=" << fmt(100 * report.idm_eval.max_rel_error) << "% ";
  require(report.idm_eval.max_rel_error < 0.05,
          "IDM recovery error " + fmt(100 * report.idm_eval.max_rel_error) + "% >= 5%");

  cfg.out_dir = out_b.string();
  run_pipeline(cfg);
  for (const char* name : {"tracked.jsonl", "scene.jsonl", "follow.csv", "params.csv",
                           "report.json", "correlation.txt"}) {
    std::ifstream fa(out_a / name, std::ios::binary), fb(out_b / name, std::ios::binary);
    require(fa.good() && fb.good(), std::string("missing artifact ") + name);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    require(sa == sb, std::string("artifact differs between runs: ") + name);
  }
  fs::remove_all(data);
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}

// ---------------------------------------------------------------------------
// 9. Service contracts

void check_service_contracts() {
  // detection service: numeric preservation
  auto oracle = std::make_shared<OracleDetector>();
  const std::vector<Detection> truth = {
      {{12.3456789, -7.6543217, 1.8437519, 4.5123457, 0.87654321}, ObjectClass::van, 0.875},
      {{-3.14159265, 2.71828183, 2.0, 5.0, -1.234567}, ObjectClass::truck, 0.5}};
  oracle->set_truth("p", truth);
  OdsServer ods(oracle);
  const int ods_port = ods.start("127.0.0.1", 0);

  GridConfig grid;
  grid.cells_per_side = 40;
  PointCloud cloud;
  cloud.frame_id = "p";
  cloud.timestamp_us = 1'000'000;
  const BevMap map = make_frgb(cloud, grid);

  OdsClient ods_client("127.0.0.1:" + std::to_string(ods_port));
  const auto dets = ods_client.request_detections(map);
  require(dets.size() == truth.size(), "detection round trip lost boxes");
  for (size_t i = 0; i < truth.size(); ++i) {
    require(std::abs(dets[i].box.cx - truth[i].box.cx) <= 1e-6 &&
                std::abs(dets[i].box.cy - truth[i].box.cy) <= 1e-6 &&
                std::abs(dets[i].box.w - truth[i].box.w) <= 1e-6 &&
                std::abs(dets[i].box.l - truth[i].box.l) <= 1e-6 &&
                std::abs(dets[i].box.yaw - truth[i].box.yaw) <= 1e-6 &&
                std::abs(dets[i].score - truth[i].score) <= 1e-6,
            "detection numeric fields drifted beyond 1e-6");
  }

  // malformed payload -> 4xx class
  {
    httplib::Client raw("127.0.0.1", ods_port);
    const auto res = raw.Post("/v1/detections", R"({"frame_id":"p"})", "application/json");
    require(res && res->status == 400, "malformed detection payload not rejected as 400");
  }
  ods.stop();

  // tracking service: isolation + numeric preservation + error classes
  MotsServer mots;
  const int mots_port = mots.start("127.0.0.1", 0);
  MotsClient mots_client("127.0.0.1:" + std::to_string(mots_port));
  TrackerConfig tcfg;
  tcfg.confirm_hits = 1;
  const std::string s1 = mots_client.create_session(tcfg);
  const std::string s2 = mots_client.create_session(tcfg);

  DetectionFrame f1;
  f1.frame_id = "a";
  f1.timestamp_us = 1'000'000;
  f1.boxes = {{{10.1234567, -2.7654321, 1.8, 4.5, 0.321}, ObjectClass::car, 0.75}};
  const TrackedFrame r1 = mots_client.post_frame(s1, f1);
  require(r1.boxes.size() == 1, "tracking round trip lost the box");
  require(std::abs(r1.boxes[0].box.cx - 10.1234567) <= 1e-6 &&
              std::abs(r1.boxes[0].box.cy - -2.7654321) <= 1e-6,
          "tracking numeric fields drifted beyond 1e-6");

  // session isolation: s2 never saw s1's object
  DetectionFrame f2;
  f2.frame_id = "b";
  f2.timestamp_us = 1'000'000;
  const TrackedFrame r2 = mots_client.post_frame(s2, f2);
  require(r2.boxes.empty(), "session state leaked across sessions");

  bool not_found = false, conflict = false, bad_request = false;
  try {
    mots_client.post_frame("missing", f2);
  } catch (const ServiceError& e) {
    not_found = e.kind == ServiceErrorKind::not_found;
  }
  try {
    mots_client.post_frame(s1, f1);  // same timestamp again
  } catch (const ServiceError& e) {
    conflict = e.kind == ServiceErrorKind::conflict;
  }
  {
    httplib::Client raw("127.0.0.1", mots_port);
    const auto res = raw.Post("/v1/sessions/" + s1 + "/frames", "{}", "application/json");
    bad_request = res && res->status == 400;
  }
  require(not_found, "unknown session not reported as not-found");
  require(conflict, "out-of-order frame not reported as conflict");
  require(bad_request, "malformed frame not rejected as 400");
  mots.stop();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(std::ostream&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 profile-intersection-count", [](std::ostream&) { check_profile_intersection(); }},
      {"C2 full-azimuth-equivariance", [](std::ostream&) { check_azimuthal_equivariance(); }},
      {"C3 oriented-iou-oracle", [](std::ostream&) { check_oriented_iou(); }},
      {"C4 tracking-lifecycle", [](std::ostream&) { check_tracking_behaviors(); }},
      {"C5 kalman-numerics", [](std::ostream&) { check_kalman_numerics(); }},
      {"C6 idm-roundtrip", [](std::ostream&) { check_idm_roundtrip(); }},
      {"C7 pcc-and-windows", [](std::ostream&) { check_pcc(); }},
      {"C8 end-to-end-pipeline", check_end_to_end},
      {"C9 service-contracts", [](std::ostream&) { check_service_contracts(); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream log;
    try {
      c.run(log);
      const double sec =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("[PASS] %s %s(%.2fs)\n", c.name, log.str().c_str(), sec);
    } catch (const std::exception& e) {
      const double sec =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("[FAIL] %s: %s (%.2fs)\n", c.name, e.what(), sec);
      ++failures;
    }
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
