#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "drivesense/filtering.hpp"
#include "drivesense/kitti.hpp"
#include "drivesense/pointcloud.hpp"

using namespace drivesense;

namespace {

PointCloud make_cloud(std::vector<Point> pts) {
  PointCloud c;
  c.points = std::move(pts);
  c.timestamp_us = 1'000'000;
  c.frame_id = "t";
  return c;
}

}  // namespace

TEST_CASE("parse_cloud_csv maps fields and preserves row order") {
  const char* text =
      "x,y,z,intensity,ring,vertical_angle\n"
      "1.0,2.0,0.5,100,3,-9.0\n";
  const PointCloud c = parse_cloud_csv(text, "f1", 42);
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0].x == doctest::Approx(1.0));
  CHECK(c.points[0].y == doctest::Approx(2.0));
  CHECK(c.points[0].z == doctest::Approx(0.5));
  CHECK(c.points[0].intensity == doctest::Approx(100));
  CHECK(c.points[0].ring == 3);
  CHECK(c.points[0].vertical_angle_deg == doctest::Approx(-9.0));
  CHECK(c.frame_id == "f1");
  CHECK(c.timestamp_us == 42);
}

TEST_CASE("parse_cloud_csv: empty data section is fine, bad rows are not") {
  CHECK(parse_cloud_csv("x,y,z,intensity,ring\n", "f", 1).points.empty());

  // intensity out of range
  CHECK_THROWS_AS(parse_cloud_csv("x,y,z,intensity,ring\n0,0,0,300,0\n", "f", 1),
                  SchemaError);
  // malformed row names the line
  try {
    parse_cloud_csv("x,y,z,intensity,ring\n0,0,zzz,1,0\n", "f", 1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  // missing column
  CHECK_THROWS_AS(parse_cloud_csv("x,y,intensity,ring\n", "f", 1), SchemaError);
}

TEST_CASE("vertical angle falls back to geometry when the column is absent") {
  const PointCloud c = parse_cloud_csv("x,y,z,intensity,ring\n1,0,1,0,0\n", "f", 1);
  CHECK(vertical_angle_of(c.points[0]) == doctest::Approx(45.0));
}

TEST_CASE("profile intersection: puck channels inside the hdl64e vFOV") {
  const auto matched = intersect_profiles(hdl64e_profile(), puck_profile());
  // the paper-anchored count
  REQUIRE(matched.size() == 9);
  std::vector<double> expect = {-15, -13, -11, -9, -7, -5, -3, -1, 1};
  for (size_t i = 0; i < matched.size(); ++i) {
    CHECK(matched[i].target_deg == doctest::Approx(expect[i]));
    // nearest hdl64e beam is within half a beam spacing
    CHECK(std::abs(matched[i].source_deg - matched[i].target_deg) <= 0.5 * 26.9 / 63.0 + 1e-9);
  }
}

TEST_CASE("profile intersection: identity and disjoint cases") {
  const SensorProfile puck = puck_profile();
  const auto self_matched = intersect_profiles(puck, puck);
  REQUIRE(self_matched.size() == puck.channel_angles_deg.size());
  for (size_t i = 0; i < self_matched.size(); ++i) {
    CHECK(self_matched[i].target_deg == self_matched[i].source_deg);
  }

  SensorProfile low{"low", {2, 4, 6, 8}, 0, 10};
  SensorProfile high{"high", {22, 24, 26}, 20, 30};
  CHECK(intersect_profiles(low, high).empty());
}

TEST_CASE("decimate keeps exactly the points near matched channels") {
  std::vector<MatchedChannel> matched;
  for (double a : {-15.0, -13.0, -11.0, -9.0, -7.0, -5.0, -3.0, -1.0, 1.0}) {
    matched.push_back({a, a});
  }
  PointCloud c = make_cloud({});
  for (double a : {-15.0, -10.0, 1.0, 5.0}) {
    Point p;
    p.vertical_angle_deg = a;
    p.x = 10.0;
    c.points.push_back(p);
  }
  const PointCloud d = decimate(c, matched, 0.5);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0].vertical_angle_deg == doctest::Approx(-15.0));
  CHECK(d.points[1].vertical_angle_deg == doctest::Approx(1.0));
  CHECK(d.frame_id == c.frame_id);
  CHECK(d.timestamp_us == c.timestamp_us);

  // idempotent, and a subset of the input
  const PointCloud dd = decimate(d, matched, 0.5);
  REQUIRE(dd.points.size() == d.points.size());

  CHECK(decimate(c, {}, 0.5).points.empty());
  CHECK(decimate(c, matched, 90.0).points.size() == c.points.size());
}

TEST_CASE("rotate_z: quarter turn, involution, distance preservation") {
  PointCloud c = make_cloud({Point{1, 0, 0, 7, 2, 0}});
  const PointCloud r = rotate_z(c, M_PI / 2);
  CHECK(r.points[0].x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.points[0].y == doctest::Approx(1.0));
  CHECK(r.points[0].z == doctest::Approx(0.0));
  CHECK(r.points[0].intensity == doctest::Approx(7));
  CHECK(r.points[0].ring == 2);

  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-30, 30);
  PointCloud big = make_cloud({});
  for (int i = 0; i < 50; ++i) big.points.push_back(Point{u(rng), u(rng), u(rng), 0, 0, 0});

  const PointCloud twice = rotate_z(rotate_z(big, M_PI), M_PI);
  for (size_t i = 0; i < big.points.size(); ++i) {
    CHECK(twice.points[i].x == doctest::Approx(big.points[i].x).epsilon(1e-9));
    CHECK(twice.points[i].y == doctest::Approx(big.points[i].y).epsilon(1e-9));
  }

  const PointCloud rot = rotate_z(big, 0.7321);
  REQUIRE(rot.points.size() == big.points.size());
  for (size_t i = 0; i < big.points.size(); ++i) {
    CHECK(rot.points[i].z == big.points[i].z);
    for (size_t j = i + 1; j < big.points.size(); ++j) {
      const double d0 = std::hypot(big.points[i].x - big.points[j].x,
                                   big.points[i].y - big.points[j].y);
      const double d1 = std::hypot(rot.points[i].x - rot.points[j].x,
                                   rot.points[i].y - rot.points[j].y);
      CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
    }
  }
}

TEST_CASE("crop matches the brute-force inside test and composes") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  PointCloud c = make_cloud({});
  for (int i = 0; i < 300; ++i) c.points.push_back(Point{u(rng), u(rng), u(rng), 0, 0, 0});

  const Bounds3 b{-40, 40, -20, 20, -2, 3};
  const PointCloud inside = crop(c, b);
  size_t expect = 0;
  for (const Point& p : c.points) {
    if (p.x >= b.x_min && p.x <= b.x_max && p.y >= b.y_min && p.y <= b.y_max &&
        p.z >= b.z_min && p.z <= b.z_max) {
      ++expect;
    }
  }
  CHECK(inside.points.size() == expect);

  CHECK(crop(make_cloud({Point{100, 0, 0, 0, 0, 0}}), b).points.empty());

  // crop(b1) then crop(b2) == crop(b1 intersect b2)
  const Bounds3 b2{-10, 35, -20, 5, -1, 2};
  const PointCloud seq = crop(crop(c, b), b2);
  const Bounds3 bi{std::max(b.x_min, b2.x_min), std::min(b.x_max, b2.x_max),
                   std::max(b.y_min, b2.y_min), std::min(b.y_max, b2.y_max),
                   std::max(b.z_min, b2.z_min), std::min(b.z_max, b2.z_max)};
  const PointCloud direct = crop(c, bi);
  CHECK(seq.points.size() == direct.points.size());
}

TEST_CASE("ground removal separates a synthetic plane from a box cluster") {
  std::mt19937 rng(17);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::uniform_real_distribution<double> u(-20, 20);
  PointCloud c = make_cloud({});
  const int n_plane = 1000;
  for (int i = 0; i < n_plane; ++i) {
    c.points.push_back(Point{u(rng), u(rng), noise(rng), 10, 0, 0});
  }
  std::uniform_real_distribution<double> ub(0.5, 2.0);
  const int n_box = 300;
  for (int i = 0; i < n_box; ++i) {
    c.points.push_back(Point{5 + 0.1 * (i % 20), 3 + 0.1 * (i / 20), ub(rng), 200, 1, 0});
  }

  GroundRemovalConfig cfg;
  cfg.inlier_threshold_m = 0.2;
  const GroundRemovalResult r = remove_ground(c, cfg);
  REQUIRE(r.plane_found);
  REQUIRE(r.plane.has_value());

  int plane_kept = 0, box_kept = 0;
  for (const Point& p : r.cloud.points) {
    if (p.ring == 0) ++plane_kept;
    else ++box_kept;
  }
  CHECK(plane_kept <= n_plane / 100);   // >= 99% of plane points removed
  CHECK(box_kept >= n_box * 99 / 100);  // >= 99% of box points kept

  // removed points satisfy the inlier bound
  std::set<std::pair<double, double>> kept;
  for (const Point& p : r.cloud.points) kept.insert({p.x, p.y});
  for (const Point& p : c.points) {
    if (!kept.count({p.x, p.y})) {
      CHECK(std::abs(r.plane->signed_distance(p)) <= cfg.inlier_threshold_m + 1e-12);
    }
  }
}

TEST_CASE("ground removal flags clouds without planar structure") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-20, 20);
  PointCloud c = make_cloud({});
  for (int i = 0; i < 800; ++i) c.points.push_back(Point{u(rng), u(rng), u(rng), 0, 0, 0});
  const GroundRemovalResult r = remove_ground(c, {});
  CHECK_FALSE(r.plane_found);
  CHECK(r.cloud.points.size() == c.points.size());
}

TEST_CASE("ground removal: pure plane empties the cloud; z mode cuts below") {
  PointCloud c = make_cloud({});
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) c.points.push_back(Point{u(rng), u(rng), 0.0, 0, 0, 0});
  const GroundRemovalResult r = remove_ground(c, {});
  CHECK(r.plane_found);
  CHECK(r.cloud.points.empty());

  GroundRemovalConfig zcfg;
  zcfg.method = GroundRemovalMethod::z_threshold;
  zcfg.z_cutoff_m = -0.5;
  PointCloud c2 = make_cloud({Point{0, 0, -1, 0, 0, 0}, Point{0, 0, 1, 0, 0, 0}});
  const GroundRemovalResult rz = remove_ground(c2, zcfg);
  REQUIRE(rz.cloud.points.size() == 1);
  CHECK(rz.cloud.points[0].z == doctest::Approx(1.0));
  CHECK_FALSE(rz.plane.has_value());
}

namespace {

// Independent union-find over the naive all-pairs adjacency.
std::vector<std::vector<int>> brute_clusters(const PointCloud& c, double eps, int min_size) {
  const int n = static_cast<int>(c.points.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = c.points[i].x - c.points[j].x;
      const double dy = c.points[i].y - c.points[j].y;
      if (dx * dx + dy * dy <= eps * eps) parent[find(i)] = find(j);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, g] : groups) {
    if (static_cast<int>(g.size()) >= min_size) {
      std::sort(g.begin(), g.end());
      out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("clustering matches the union-find oracle and partitions points") {
  std::mt19937 rng(31);
  std::normal_distribution<double> n1(0.0, 0.3);
  PointCloud c = make_cloud({});
  for (int i = 0; i < 60; ++i) c.points.push_back(Point{n1(rng), n1(rng), 0, 0, 0, 0});
  for (int i = 0; i < 60; ++i) c.points.push_back(Point{10 + n1(rng), n1(rng), 0, 0, 0, 0});
  // a sparse chain connecting nothing
  c.points.push_back(Point{-20, -20, 0, 0, 0, 0});

  auto got = cluster(c, 0.5, 5);
  auto expect = brute_clusters(c, 0.5, 5);
  std::sort(got.begin(), got.end());
  CHECK(got == expect);
  CHECK(got.size() == 2);

  // two blobs 10m apart with eps 0.5 never merge
  std::set<int> seen;
  for (const auto& g : cluster(c, 0.5, 1)) {
    for (int i : g) CHECK(seen.insert(i).second);  // disjoint
  }

  // single point below min size
  CHECK(cluster(make_cloud({Point{}}), 0.5, 2).empty());

  // chain within eps is one cluster (transitivity)
  PointCloud chain = make_cloud({});
  for (int i = 0; i < 30; ++i) chain.points.push_back(Point{0.4 * i, 0, 0, 0, 0, 0});
  CHECK(cluster(chain, 0.5, 1).size() == 1);
}

TEST_CASE("kitti labels: whitelist, containment, and non-empty test") {
  // pedestrian over a dense cluster is dropped; car with no support is dropped
  const char* text =
      "Pedestrian 0.00 0 0.00 0 0 0 0 1.8 0.6 0.8 5.0 0.0 0.0 0.00\n"
      "Car 0.00 0 0.00 0 0 0 0 1.5 1.8 4.5 5.0 0.0 0.0 0.00\n"
      "Car 0.00 0 0.00 0 0 0 0 1.5 1.8 4.5 30.0 0.0 0.0 0.00\n";
  const auto labels = parse_kitti_labels(text);
  REQUIRE(labels.size() == 3);

  PointCloud cloud;
  cloud.frame_id = "k";
  cloud.timestamp_us = 1;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 50; ++i) {
    cloud.points.push_back(Point{5.0 + u(rng), u(rng), u(rng) * 0.5, 0, 0, 0});
  }

  const auto kept = decimate_labels(labels, cloud, 1);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].object_type == "Car");
  CHECK(kept[0].x == doctest::Approx(5.0));
}

TEST_CASE("kitti label containment respects rotation") {
  KittiLabel label;
  label.object_type = "Car";
  label.height = 2.0;
  label.width = 2.0;
  label.length = 6.0;
  label.rotation_y = M_PI / 2;  // long axis along y
  CHECK(label.contains(Point{0, 2.5, 0, 0, 0, 0}));
  CHECK_FALSE(label.contains(Point{2.5, 0, 0, 0, 0, 0}));
}
