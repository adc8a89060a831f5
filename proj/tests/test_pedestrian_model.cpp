#include <doctest.h>

#include <random>
#include <stdexcept>

#include "frozone/pedestrian_model.hpp"

using namespace frozone;

TEST_CASE("walking_speed examples") {
  const FdParams fd;
  CHECK(walking_speed(100.0, fd, 1.3) == doctest::Approx(1.3));
  CHECK(walking_speed(0.0, fd, 1.3) == 0.0);
  CHECK(walking_speed(1.0, fd, 1.3) == doctest::Approx(0.390625));
  CHECK_THROWS_AS(walking_speed(-0.1, fd, 1.3), std::invalid_argument);
}

TEST_CASE("FdParams validation") {
  FdParams fd;
  CHECK_NOTHROW(fd.validate());
  fd.beta = 0.0;
  CHECK_THROWS_AS(fd.validate(), std::invalid_argument);
}

TEST_CASE("front_space examples") {
  PedestrianState ped;
  ped.position = {0, 0};
  ped.forward = {1, 0};
  ped.radius = 0.2;
  CHECK(front_space(ped, {}, 4.0) == doctest::Approx(4.0));
  const std::vector<Disc> ahead{{{2, 0}, 0.3}};
  CHECK(front_space(ped, ahead, 4.0) == doctest::Approx(1.5));
  const std::vector<Disc> behind{{{-2, 0}, 0.3}};
  CHECK(front_space(ped, behind, 4.0) == doctest::Approx(4.0));
  const std::vector<Disc> touching{{{0.4, 0}, 0.3}};
  CHECK(front_space(ped, touching, 4.0) == 0.0);
}

TEST_CASE("step_pedestrian examples") {
  PedestrianState ped;
  ped.position = {0, 0};
  ped.waypoints = {{5, 0}};
  const PedestrianState a = step_pedestrian(ped, 1.3, 0.1);
  CHECK(a.position.x == doctest::Approx(0.13));
  CHECK(a.position.y == doctest::Approx(0.0));

  PedestrianState near = ped;
  near.waypoints = {{0.05, 0}, {5, 0}};
  CHECK(step_pedestrian(near, 1.0, 0.01).waypoint_index == 1);

  PedestrianState done = ped;
  done.forward = {0, 1};
  done.waypoint_index = 1;
  const PedestrianState d = step_pedestrian(done, 1.3, 0.1);
  CHECK(d.position == done.position);
  CHECK(d.forward == done.forward);
  CHECK(d.waypoint_index == 1);
}

TEST_CASE("PedestrianState validation") {
  PedestrianState ped;
  CHECK_NOTHROW(ped.validate());
  ped.pref_speed = 3.5;
  CHECK_THROWS_AS(ped.validate(), std::invalid_argument);
  ped.pref_speed = 1.0;
  ped.radius = 0.6;
  CHECK_THROWS_AS(ped.validate(), std::invalid_argument);
}

TEST_CASE("property: walking_speed monotone, bounded, saturates") {
  const FdParams fd;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pref(0.2, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double vp = pref(rng);
    const double sat = fd.height_factor * (1.0 + fd.beta) * std::sqrt(vp) / fd.alpha;
    double prev = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double s = 6.0 * i / 500.0;
      const double v = walking_speed(s, fd, vp);
      CHECK(v >= prev);
      CHECK(v <= vp);
      if (s >= sat) CHECK(v == doctest::Approx(vp));
      prev = v;
    }
  }
}

TEST_CASE("property: step_pedestrian keeps unit forward and never overshoots") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> speed(0.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    PedestrianState ped;
    ped.position = {coord(rng), coord(rng)};
    ped.waypoints = {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    for (int k = 0; k < 50 && !ped.finished(); ++k) {
      // Waypoints already within the reach distance are skipped first.
      std::size_t active = ped.waypoint_index;
      while (active < ped.waypoints.size() && dist(ped.position, ped.waypoints[active]) < kWaypointReachedDist) {
        ++active;
      }
      if (active == ped.waypoints.size()) break;
      const Vec2 target = ped.waypoints[active];
      const double before = dist(ped.position, target);
      const double v = speed(rng);
      const PedestrianState next = step_pedestrian(ped, v, 0.1);
      CHECK(std::abs(next.forward.norm() - 1.0) <= 1e-9);
      CHECK(dist(next.position, ped.position) <= v * 0.1 + 1e-12);
      CHECK(dist(next.position, target) <= std::max(before - v * 0.1, 0.0) + 1e-9);
      ped = next;
    }
  }
}
