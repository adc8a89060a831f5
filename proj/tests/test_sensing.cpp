#include <doctest.h>

#include <numbers>
#include <random>
#include <stdexcept>

#include "frozone/sensing.hpp"

using namespace frozone;

namespace {

PedestrianState ped_at(const Vec2& p) {
  PedestrianState ped;
  ped.position = p;
  return ped;
}

SensorConfig noiseless() {
  SensorConfig cfg;
  cfg.pos_noise_sigma = 0.0;
  return cfg;
}

Observation seen(int id, const Vec2& p) {
  Observation o;
  o.id = id;
  o.position = p;
  return o;
}

}  // namespace

TEST_CASE("sense examples") {
  std::mt19937_64 rng(1);
  const SensorConfig cfg = noiseless();
  const Pose2 robot{};
  const std::vector<PedestrianState> inside{ped_at({2, 0})};
  const SensorFrame a = sense(inside, 0.0, robot, cfg, rng);
  REQUIRE(a.observations.size() == 1);
  CHECK(a.observations[0].position == Vec2{2, 0});
  CHECK_FALSE(a.observations[0].speed.has_value());

  const std::vector<PedestrianState> blind{ped_at({0.3, 0})};
  CHECK(sense(blind, 0.0, robot, cfg, rng).observations.empty());
  const std::vector<PedestrianState> wide{ped_at({2, 2})};
  CHECK(sense(wide, 0.0, robot, cfg, rng).observations.empty());
  // Inside the square but outside the 60° field of view.
  const std::vector<PedestrianState> off_axis{ped_at({1.0, 1.2})};
  CHECK(sense(off_axis, 0.0, robot, cfg, rng).observations.empty());

  PedestrianState wall = ped_at({2, 0});
  wall.is_static = true;
  const std::vector<PedestrianState> walls{wall};
  CHECK(sense(walls, 0.0, robot, cfg, rng).observations.empty());
}

TEST_CASE("sense uses the robot pose") {
  std::mt19937_64 rng(1);
  const Pose2 robot{{1, 1}, std::numbers::pi / 2};
  const std::vector<PedestrianState> peds{ped_at({1, 3})};
  const SensorFrame f = sense(peds, 0.0, robot, noiseless(), rng);
  REQUIRE(f.observations.size() == 1);
  CHECK(f.observations[0].position.x == doctest::Approx(2.0));
  CHECK(f.observations[0].position.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scan sees static discs within range") {
  std::mt19937_64 rng(1);
  RangeSensorConfig cfg;
  cfg.noise_sigma = 0.0;
  PedestrianState wall = ped_at({0, 2});
  wall.is_static = true;
  const std::vector<PedestrianState> peds{wall, ped_at({5, 0}), ped_at({-3, 0})};
  const SensorFrame f = scan(peds, 0.0, Pose2{}, cfg, rng);
  REQUIRE(f.observations.size() == 1);
  CHECK(f.observations[0].id == 0);
}

TEST_CASE("estimate_motion examples") {
  SensorFrame prev{0.0, Pose2{}, {seen(0, {2, 0})}};
  SensorFrame curr{0.1, Pose2{}, {seen(0, {2, 0.13}), seen(1, {3, 0})}};
  const SensorFrame out = estimate_motion(prev, curr);
  REQUIRE(out.observations[0].speed.has_value());
  CHECK(*out.observations[0].speed == doctest::Approx(1.3));
  CHECK(out.observations[0].forward->x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(out.observations[0].forward->y == doctest::Approx(1.0));
  CHECK_FALSE(out.observations[1].speed.has_value());
  CHECK(out.observations[1].velocity() == Vec2{0, 0});

  // Static pedestrian, robot advancing 0.05 m per frame.
  SensorFrame p2{0.0, Pose2{{0, 0}, 0.0}, {seen(0, {2, 0})}};
  SensorFrame c2{0.1, Pose2{{0.05, 0}, 0.0}, {seen(0, {1.95, 0})}};
  CHECK(*estimate_motion(p2, c2).observations[0].speed == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(estimate_motion(curr, prev), std::invalid_argument);
}

TEST_CASE("MotionTracker waits for min_frames before reporting motion") {
  MotionTracker tracker(5, 3);
  for (int k = 0; k < 5; ++k) {
    const double t = 0.1 * k;
    const SensorFrame out = tracker.update({t, Pose2{}, {seen(0, {3.0 - t, 0})}});
    if (k < 3) {
      CHECK_FALSE(out.observations[0].speed.has_value());
    } else {
      REQUIRE(out.observations[0].speed.has_value());
      CHECK(*out.observations[0].speed == doctest::Approx(1.0));
      CHECK(out.observations[0].forward->x == doctest::Approx(-1.0));
    }
  }
}

TEST_CASE("bbox_to_position examples") {
  const SensorConfig cfg;
  const Vec2 center = bbox_to_position({0, cfg.image_w / 2.0, 2.0}, cfg);
  CHECK(center.x == doctest::Approx(2.0));
  CHECK(center.y == doctest::Approx(0.0));
  const Vec2 left = bbox_to_position({0, 0.0, 2.0}, cfg);
  CHECK(left.x == doctest::Approx(1.732).epsilon(1e-3));
  CHECK(left.y == doctest::Approx(1.0));
  const Vec2 right = bbox_to_position({0, static_cast<double>(cfg.image_w), 1.0}, cfg);
  CHECK(right.x == doctest::Approx(0.866).epsilon(1e-3));
  CHECK(right.y == doctest::Approx(-0.5));
}

TEST_CASE("SensorConfig validation") {
  SensorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.offset = 3.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SensorConfig{};
  cfg.frame_dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SensorConfig{};
  cfg.fov = std::numbers::pi;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("property: noisy observations stay inside the sensing square") {
  std::mt19937_64 rng(17);
  SensorConfig cfg;
  cfg.pos_noise_sigma = 0.5;
  std::uniform_real_distribution<double> x(0.0, 4.0);
  std::uniform_real_distribution<double> y(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<PedestrianState> peds;
    for (int i = 0; i < 10; ++i) peds.push_back(ped_at({x(rng), y(rng)}));
    for (const Observation& o : sense(peds, 0.0, Pose2{}, cfg, rng).observations) {
      CHECK(cfg.in_square(o.position));
    }
  }
}

TEST_CASE("property: noiseless differencing recovers scripted speeds") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> speed(0.0, 2.0);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  const SensorConfig cfg = noiseless();
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 v = rotate({speed(rng), 0.0}, ang(rng));
    const std::vector<PedestrianState> a{ped_at({2, 0})};
    const std::vector<PedestrianState> b{ped_at(Vec2{2, 0} + v * cfg.frame_dt)};
    const SensorFrame f0 = sense(a, 0.0, Pose2{}, cfg, rng);
    const SensorFrame f1 = sense(b, cfg.frame_dt, Pose2{}, cfg, rng);
    const SensorFrame out = estimate_motion(f0, f1);
    REQUIRE(out.observations.size() == 1);
    CHECK(std::abs(*out.observations[0].speed - v.norm()) <= 1e-6);
  }
}

TEST_CASE("property: bbox synthesis inverts exactly") {
  std::mt19937_64 rng(23);
  const SensorConfig cfg;
  std::uniform_real_distribution<double> depth(cfg.offset + 0.01, cfg.offset + cfg.side - 0.01);
  std::uniform_real_distribution<double> bearing(-cfg.fov / 2, cfg.fov / 2);
  for (int trial = 0; trial < 5000; ++trial) {
    const Vec2 p = rotate({depth(rng), 0.0}, bearing(rng));
    const SyntheticBBox box = synthesize_bbox(trial, p, cfg);
    CHECK(box.centroid_x >= 0.0);
    CHECK(box.centroid_x <= cfg.image_w);
    CHECK(dist(bbox_to_position(box, cfg), p) <= 1e-9);
  }
}
