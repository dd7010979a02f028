#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drivesense/bev.hpp"
#include "drivesense/detector.hpp"
#include "drivesense/filtering.hpp"
#include "drivesense/geometry.hpp"
#include "drivesense/idm.hpp"
#include "drivesense/kitti.hpp"
#include "drivesense/pointcloud.hpp"
#include "drivesense/scene.hpp"
#include "drivesense/signal.hpp"
#include "drivesense/tracking.hpp"

namespace py = pybind11;
using namespace drivesense;

namespace {

py::array_t<float> plane_array(const BevMap& map, const std::vector<float>& plane) {
  py::array_t<float> arr({map.rows, map.cols});
  std::copy(plane.begin(), plane.end(), arr.mutable_data());
  return arr;
}

SignalSeries series_from_arrays(const std::vector<std::int64_t>& t,
                                const std::vector<double>& v) {
  SignalSeries s;
  s.timestamps_us = t;
  s.values = v;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lidar scene perception and driver characterization core";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OrderingError>(m, "OrderingError", PyExc_ValueError);

  py::class_<Point>(m, "Point")
      .def(py::init([](double x, double y, double z, double intensity, int ring,
                       double vertical_angle) {
             Point p{x, y, z, intensity, ring, vertical_angle};
             return p;
           }),
           py::arg("x"), py::arg("y"), py::arg("z"), py::arg("intensity") = 0.0,
           py::arg("ring") = 0,
           py::arg("vertical_angle") = std::numeric_limits<double>::quiet_NaN())
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def_readwrite("z", &Point::z)
      .def_readwrite("intensity", &Point::intensity)
      .def_readwrite("ring", &Point::ring)
      .def_readwrite("vertical_angle", &Point::vertical_angle_deg);

  py::class_<PointCloud>(m, "PointCloud")
      .def(py::init<>())
      .def_readwrite("points", &PointCloud::points)
      .def_readwrite("timestamp_us", &PointCloud::timestamp_us)
      .def_readwrite("frame_id", &PointCloud::frame_id)
      .def("__len__", [](const PointCloud& c) { return c.points.size(); });

  py::class_<SensorProfile>(m, "SensorProfile")
      .def(py::init<>())
      .def_readwrite("name", &SensorProfile::name)
      .def_readwrite("channel_angles_deg", &SensorProfile::channel_angles_deg)
      .def_readwrite("vfov_min_deg", &SensorProfile::vfov_min_deg)
      .def_readwrite("vfov_max_deg", &SensorProfile::vfov_max_deg);

  py::class_<MatchedChannel>(m, "MatchedChannel")
      .def_readonly("target_deg", &MatchedChannel::target_deg)
      .def_readonly("source_deg", &MatchedChannel::source_deg);

  m.def("puck_profile", &puck_profile);
  m.def("hdl64e_profile", &hdl64e_profile);
  m.def("intersect_profiles", &intersect_profiles, py::arg("source"), py::arg("target"));
  m.def("parse_cloud_csv", &parse_cloud_csv, py::arg("text"), py::arg("frame_id"),
        py::arg("timestamp_us"));
  m.def("cloud_to_csv", &cloud_to_csv);
  m.def("decimate", &decimate, py::arg("cloud"), py::arg("matched"), py::arg("tol_deg") = 0.5);
  m.def("rotate_z", &rotate_z, py::arg("cloud"), py::arg("angle_rad"));
  m.def("crop",
        [](const PointCloud& cloud, double x_min, double x_max, double y_min,
           double y_max, double z_min, double z_max) {
          return crop(cloud, Bounds3{x_min, x_max, y_min, y_max, z_min, z_max});
        },
        py::arg("cloud"), py::arg("x_min"), py::arg("x_max"), py::arg("y_min"),
        py::arg("y_max"), py::arg("z_min"), py::arg("z_max"));
  m.def("remove_ground",
        [](const PointCloud& cloud, double inlier_threshold_m, int iterations) {
          GroundRemovalConfig cfg;
          cfg.inlier_threshold_m = inlier_threshold_m;
          cfg.iterations = iterations;
          const GroundRemovalResult r = remove_ground(cloud, cfg);
          return py::make_tuple(r.cloud, r.plane_found);
        },
        py::arg("cloud"), py::arg("inlier_threshold_m") = 0.2, py::arg("iterations") = 100);
  m.def("cluster", &cluster, py::arg("cloud"), py::arg("eps_m") = 0.5,
        py::arg("min_cluster_size") = 5);

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init<>())
      .def_readwrite("extent_m", &GridConfig::extent_m)
      .def_readwrite("cells_per_side", &GridConfig::cells_per_side)
      .def_readwrite("z_min", &GridConfig::z_min)
      .def_readwrite("z_max", &GridConfig::z_max)
      .def("cell_size", &GridConfig::cell_size);

  py::class_<BevMap>(m, "BevMap")
      .def_readonly("rows", &BevMap::rows)
      .def_readonly("cols", &BevMap::cols)
      .def_readonly("frame_id", &BevMap::frame_id)
      .def_readonly("timestamp_us", &BevMap::timestamp_us)
      .def_property_readonly("height", [](const BevMap& m) { return plane_array(m, m.height); })
      .def_property_readonly("intensity",
                             [](const BevMap& m) { return plane_array(m, m.intensity); })
      .def_property_readonly("density", [](const BevMap& m) { return plane_array(m, m.density); });

  m.def("make_frgb", &make_frgb, py::arg("cloud"), py::arg("config") = GridConfig{});
  m.def("meters_to_cell", &meters_to_cell, py::arg("config"), py::arg("x"), py::arg("y"));
  m.def("cell_to_meters", &cell_to_meters, py::arg("config"), py::arg("row"), py::arg("col"));

  py::enum_<ObjectClass>(m, "ObjectClass")
      .value("car", ObjectClass::car)
      .value("van", ObjectClass::van)
      .value("truck", ObjectClass::truck);

  py::class_<OrientedBox>(m, "OrientedBox")
      .def(py::init([](double cx, double cy, double w, double l, double yaw) {
             return OrientedBox{cx, cy, w, l, yaw};
           }),
           py::arg("cx"), py::arg("cy"), py::arg("w"), py::arg("l"), py::arg("yaw") = 0.0)
      .def_readwrite("cx", &OrientedBox::cx)
      .def_readwrite("cy", &OrientedBox::cy)
      .def_readwrite("w", &OrientedBox::w)
      .def_readwrite("l", &OrientedBox::l)
      .def_readwrite("yaw", &OrientedBox::yaw);

  m.def("iou_oriented", &iou_oriented, py::arg("a"), py::arg("b"));

  py::class_<Detection>(m, "Detection")
      .def(py::init([](const OrientedBox& box, ObjectClass cls, double score) {
             return Detection{box, cls, score};
           }),
           py::arg("box"), py::arg("cls") = ObjectClass::car, py::arg("score") = 1.0)
      .def_readwrite("box", &Detection::box)
      .def_readwrite("cls", &Detection::cls)
      .def_readwrite("score", &Detection::score);

  py::class_<TrackedBox>(m, "TrackedBox")
      .def_readonly("box", &TrackedBox::box)
      .def_readonly("cls", &TrackedBox::cls)
      .def_readonly("score", &TrackedBox::score)
      .def_readonly("id", &TrackedBox::id)
      .def_readonly("vx", &TrackedBox::vx)
      .def_readonly("vy", &TrackedBox::vy);

  m.def("rotate_detection", &rotate_detection, py::arg("det"), py::arg("angle_rad") = M_PI);
  m.def("consolidate", &consolidate, py::arg("front"), py::arg("rear_rotated_back"),
        py::arg("iou_thresh") = 0.3);

  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("noise_sigma_m", &OracleConfig::noise_sigma_m)
      .def_readwrite("false_negative_rate", &OracleConfig::false_negative_rate)
      .def_readwrite("false_positive_rate", &OracleConfig::false_positive_rate)
      .def_readwrite("false_positive_slots", &OracleConfig::false_positive_slots)
      .def_readwrite("seed", &OracleConfig::seed);

  py::class_<OracleDetector>(m, "OracleDetector")
      .def(py::init<>())
      .def(py::init<OracleConfig>())
      .def("set_truth", &OracleDetector::set_truth)
      .def("detect", &OracleDetector::detect);

  m.def("detect_full_azimuth",
        [](const PointCloud& cloud, OracleDetector& detector, const GridConfig& grid,
           double consolidation_iou, double seam_margin_m) {
          FullAzimuthConfig cfg{grid, consolidation_iou, seam_margin_m};
          return detect_full_azimuth(cloud, detector, cfg);
        },
        py::arg("cloud"), py::arg("detector"), py::arg("grid") = GridConfig{},
        py::arg("consolidation_iou") = 0.3, py::arg("seam_margin_m") = 0.0);

  py::class_<TrackerConfig>(m, "TrackerConfig")
      .def(py::init<>())
      .def_readwrite("confirm_hits", &TrackerConfig::confirm_hits)
      .def_readwrite("max_misses", &TrackerConfig::max_misses)
      .def_readwrite("gate_iou", &TrackerConfig::gate_iou)
      .def_readwrite("process_noise_accel_sigma", &TrackerConfig::process_noise_accel_sigma)
      .def_readwrite("meas_noise_sigma", &TrackerConfig::meas_noise_sigma)
      .def_readwrite("extents_smoothing_alpha", &TrackerConfig::extents_smoothing_alpha);

  py::class_<DetectionFrame>(m, "DetectionFrame")
      .def(py::init<>())
      .def_readwrite("frame_id", &DetectionFrame::frame_id)
      .def_readwrite("timestamp_us", &DetectionFrame::timestamp_us)
      .def_readwrite("boxes", &DetectionFrame::boxes);

  py::class_<TrackedFrame>(m, "TrackedFrame")
      .def_readonly("frame_id", &TrackedFrame::frame_id)
      .def_readonly("timestamp_us", &TrackedFrame::timestamp_us)
      .def_readonly("boxes", &TrackedFrame::boxes);

  py::class_<Tracker>(m, "Tracker")
      .def(py::init<TrackerConfig>(), py::arg("config") = TrackerConfig{})
      .def("update_frame", &Tracker::update_frame);

  py::class_<LaneConfig>(m, "LaneConfig")
      .def(py::init<>())
      .def_readwrite("lane_width", &LaneConfig::lane_width)
      .def_readwrite("num_side_lanes", &LaneConfig::num_side_lanes);

  py::enum_<Lane>(m, "Lane")
      .value("ego", Lane::ego)
      .value("left", Lane::left)
      .value("right", Lane::right)
      .value("outside", Lane::outside);

  m.def("assign_lane", &assign_lane, py::arg("box"), py::arg("lanes") = LaneConfig{});

  py::class_<IdmParams>(m, "IdmParams")
      .def(py::init([](double s0, double v0, double T, double a, double b, double delta) {
             return IdmParams{s0, v0, T, a, b, delta};
           }),
           py::arg("s0") = 2.0, py::arg("v0") = 30.0, py::arg("T") = 1.5,
           py::arg("a") = 1.0, py::arg("b") = 2.0, py::arg("delta") = 4.0)
      .def_readwrite("s0", &IdmParams::s0)
      .def_readwrite("v0", &IdmParams::v0)
      .def_readwrite("T", &IdmParams::T)
      .def_readwrite("a", &IdmParams::a)
      .def_readwrite("b", &IdmParams::b)
      .def_readwrite("delta", &IdmParams::delta);

  py::class_<FollowSample>(m, "FollowSample")
      .def(py::init([](std::int64_t t, double v, double s, double dv, double a_obs) {
             return FollowSample{t, v, s, dv, a_obs};
           }),
           py::arg("timestamp_us"), py::arg("v"), py::arg("s"), py::arg("dv"),
           py::arg("a_obs"))
      .def_readwrite("timestamp_us", &FollowSample::timestamp_us)
      .def_readwrite("v", &FollowSample::v)
      .def_readwrite("s", &FollowSample::s)
      .def_readwrite("dv", &FollowSample::dv)
      .def_readwrite("a_obs", &FollowSample::a_obs);

  m.def("idm_accel", &idm_accel, py::arg("params"), py::arg("v"), py::arg("s"), py::arg("dv"));
  m.def("simulate_follower",
        [](const IdmParams& p, const std::vector<std::pair<double, double>>& leader,
           double init_v, double init_s, double dt_s, int steps) {
          SpeedProfile profile{leader};
          return simulate_follower(p, profile, SimInit{init_v, init_s}, dt_s, steps);
        },
        py::arg("params"), py::arg("leader_breakpoints"), py::arg("init_v"),
        py::arg("init_s"), py::arg("dt_s"), py::arg("steps"));
  m.def("fit_idm",
        [](const std::vector<FollowSample>& window) {
          const FitResult r = fit_idm(window, IdmBounds{});
          return py::make_tuple(r.params, r.sse);
        },
        py::arg("window"));

  m.def("pearson",
        [](const std::vector<std::int64_t>& tx, const std::vector<double>& vx,
           const std::vector<std::int64_t>& ty, const std::vector<double>& vy,
           std::int64_t t0_us, std::int64_t t1_us, double grid_hz) {
          return pearson(series_from_arrays(tx, vx), series_from_arrays(ty, vy),
                         t0_us, t1_us, grid_hz);
        },
        py::arg("x_timestamps_us"), py::arg("x_values"), py::arg("y_timestamps_us"),
        py::arg("y_values"), py::arg("t0_us"), py::arg("t1_us"), py::arg("grid_hz") = 2.0);
}
