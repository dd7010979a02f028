#include <doctest.h>

#include <algorithm>
#include <random>

#include "drivesense/scene.hpp"

using namespace drivesense;

namespace {

TrackedBox box_at(double cx, double cy, std::int64_t id, double vx = 0.0, double l = 4.5) {
  TrackedBox b;
  b.box = {cx, cy, 1.8, l, 0.0};
  b.id = id;
  b.vx = vx;
  return b;
}

}  // namespace

TEST_CASE("parse_dynamics: ordering, duplicates, validation") {
  const char* text =
      "timestamp_us,speed_mps,accel_mps2,steer_deg,throttle,brake\n"
      "3000000,12.0,0.1,0.0,0.2,0.0\n"
      "1000000,10.0,0.0,0.0,0.1,0.0\n"
      "2000000,11.0,0.2,0.0,0.3,0.0\n";
  const auto series = parse_dynamics(text);
  REQUIRE(series.size() == 3);
  CHECK(series[0].timestamp_us == 1'000'000);  // shuffled rows are sorted
  CHECK(series[2].timestamp_us == 3'000'000);
  CHECK(series[1].speed == doctest::Approx(11.0));
  CHECK(series[1].accel.value() == doctest::Approx(0.2));

  CHECK_THROWS_AS(parse_dynamics("timestamp_us,speed_mps\n1,5\n1,6\n"), SchemaError);
  CHECK_THROWS_AS(parse_dynamics("timestamp_us,speed_mps\n1,-2\n"), SchemaError);
  // optional columns may be absent entirely
  const auto minimal = parse_dynamics("timestamp_us,speed_mps\n1000,4\n");
  CHECK_FALSE(minimal[0].accel.has_value());
}

TEST_CASE("ego_speed_at interpolates linearly and rejects out-of-range queries") {
  const auto series = parse_dynamics(
      "timestamp_us,speed_mps\n0,10\n1000000,20\n");
  CHECK(ego_speed_at(series, 500'000) == doctest::Approx(15.0));
  CHECK(ego_speed_at(series, 0) == doctest::Approx(10.0));
  CHECK(ego_speed_at(series, 1'000'000) == doctest::Approx(20.0));
  CHECK_THROWS_AS(ego_speed_at(series, -1), std::out_of_range);
  CHECK_THROWS_AS(ego_speed_at(series, 1'000'001), std::out_of_range);
}

TEST_CASE("assign_lane thresholds") {
  const LaneConfig lanes;  // width 3.5
  CHECK(assign_lane(box_at(10, 0.0, 1), lanes) == Lane::ego);
  CHECK(assign_lane(box_at(10, 1.75, 1), lanes) == Lane::ego);    // boundary inclusive
  CHECK(assign_lane(box_at(10, 4.0, 1), lanes) == Lane::left);    // 1.75 < 4.0 <= 5.25
  CHECK(assign_lane(box_at(10, 5.25, 1), lanes) == Lane::left);
  CHECK(assign_lane(box_at(10, -4.0, 1), lanes) == Lane::right);
  CHECK(assign_lane(box_at(10, -6.0, 1), lanes) == Lane::outside);  // |cy| > 5.25
  CHECK(assign_lane(box_at(10, 6.0, 1), lanes) == Lane::outside);

  LaneConfig none;
  none.num_side_lanes = 0;
  CHECK(assign_lane(box_at(10, 4.0, 1), none) == Lane::outside);
}

TEST_CASE("summarize_scene picks nearest leader/follower per lane") {
  const LaneConfig lanes;
  const std::vector<TrackedBox> tracks = {
      box_at(10, 0, 1, -2.0), box_at(25, 0, 2, 1.0),   // ego lane leaders
      box_at(-8, 0.5, 3, 0.5),                          // ego lane follower
      box_at(15, 3.6, 4, 0.0),                          // left lane leader
      box_at(-20, -3.4, 5, -1.0),                       // right lane follower
  };
  const SceneSummary s = summarize_scene(tracks, lanes, 15.0, 4.5, 77);
  CHECK(s.timestamp_us == 77);

  REQUIRE(s.ego.leader.has_value());
  CHECK(s.ego.leader->track_id == 1);  // cx=10 beats cx=25
  CHECK(s.ego.leader->gap_m == doctest::Approx(10.0 - 4.5));
  CHECK(s.ego.leader->rel_speed == doctest::Approx(2.0));  // -vx, positive = closing

  REQUIRE(s.ego.follower.has_value());
  CHECK(s.ego.follower->track_id == 3);
  CHECK(s.ego.follower->rel_speed == doctest::Approx(0.5));  // +vx for follower

  REQUIRE(s.left.leader.has_value());
  CHECK(s.left.leader->track_id == 4);
  CHECK_FALSE(s.left.follower.has_value());
  REQUIRE(s.right.follower.has_value());
  CHECK(s.right.follower->track_id == 5);
  CHECK_FALSE(s.right.leader.has_value());
}

TEST_CASE("summarize_scene: gap formula, clamp, and order invariance") {
  const LaneConfig lanes;
  // leader at cx=20, both lengths 4.5 -> gap 15.5
  auto s = summarize_scene({box_at(20, 0, 9)}, lanes, 10.0, 4.5, 0);
  REQUIRE(s.ego.leader.has_value());
  CHECK(s.ego.leader->gap_m == doctest::Approx(15.5));

  // overlapping bumper clamp
  s = summarize_scene({box_at(3.0, 0, 9)}, lanes, 10.0, 4.5, 0);
  CHECK(s.ego.leader->gap_m == doctest::Approx(0.1));

  // order invariance
  std::vector<TrackedBox> tracks = {box_at(10, 0, 1), box_at(25, 0, 2),
                                    box_at(-8, 0, 3), box_at(15, 3.6, 4)};
  const SceneSummary a = summarize_scene(tracks, lanes, 15.0, 4.5, 0);
  std::mt19937 rng(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(tracks.begin(), tracks.end(), rng);
    const SceneSummary b = summarize_scene(tracks, lanes, 15.0, 4.5, 0);
    CHECK(a.ego.leader->track_id == b.ego.leader->track_id);
    CHECK(a.ego.follower->track_id == b.ego.follower->track_id);
    CHECK(a.left.leader->track_id == b.left.leader->track_id);
  }

  // no tracks behind -> no follower
  const SceneSummary none = summarize_scene({box_at(12, 0, 1)}, lanes, 10, 4.5, 0);
  CHECK_FALSE(none.ego.follower.has_value());
}
