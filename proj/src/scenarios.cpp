#include <algorithm>

#include "frozone/simulator.hpp"

namespace frozone {

namespace {

ScenarioConfig base(const std::string& name, Vec2 goal) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.robot.position = {0.0, 0.0};
  cfg.robot.heading = 0.0;
  cfg.robot.goal = goal;
  return cfg;
}

// A single pedestrian walks toward the robot's start and halts there; the
// speed law makes it stop in front of the robot when the two meet.
ScenarioConfig head_on(const std::string& name, double distance) {
  ScenarioConfig cfg = base(name, {8.0, 0.0});
  cfg.pedestrians.push_back({{distance, 0.0}, {{0.0, 0.0}}, 1.0, 0.25});
  return cfg;
}

// A single pedestrian crosses the robot's path from its right.
ScenarioConfig perpendicular(const std::string& name, double distance) {
  ScenarioConfig cfg = base(name, {8.0, 0.0});
  cfg.pedestrians.push_back({{distance, -distance}, {{distance, 8.0}}, 1.0, 0.25});
  return cfg;
}

ScenarioConfig corridor() {
  ScenarioConfig cfg = base("corridor", {15.0, 0.0});
  cfg.walls = {{{-1.0, -2.5}, {17.0, -2.5}}, {{-1.0, 2.5}, {17.0, 2.5}}};
  // Oncoming pairs walking side by side down the middle.
  for (double x : {5.0, 9.0, 13.0, 17.0, 21.0}) {
    cfg.pedestrians.push_back({{x, -0.35}, {{-2.0, -0.35}}, 1.0, 0.25});
    cfg.pedestrians.push_back({{x + 0.4, 0.35}, {{-2.0, 0.35}}, 1.0, 0.25});
  }
  // Zig-zag walkers weaving across the corridor.
  for (double x : {7.0, 11.0, 15.0, 19.0, 23.0}) {
    PedestrianScript zz{{x, 1.2}, {}, 0.9, 0.25};
    double y = -1.2;
    for (double wx = x - 2.0; wx > -2.0; wx -= 2.0) {
      zz.waypoints.push_back({wx, y});
      y = -y;
    }
    zz.waypoints.push_back({-2.0, y});
    cfg.pedestrians.push_back(zz);
  }
  return cfg;
}

ScenarioConfig crossing() {
  ScenarioConfig cfg = base("crossing", {15.0, 0.0});
  // Plus-shaped junction: east-west corridor |y| <= 2, north-south corridor 6 <= x <= 10.
  cfg.walls = {
      {{-1.0, -2.0}, {6.0, -2.0}}, {{10.0, -2.0}, {17.0, -2.0}},
      {{-1.0, 2.0}, {6.0, 2.0}},   {{10.0, 2.0}, {17.0, 2.0}},
      {{6.0, -9.0}, {6.0, -2.0}},  {{10.0, -9.0}, {10.0, -2.0}},
      {{6.0, 2.0}, {6.0, 9.0}},    {{10.0, 2.0}, {10.0, 9.0}},
  };
  const double xs[] = {7.0, 8.0, 9.0};
  for (int i = 0; i < 3; ++i) {
    const double x = xs[i];
    cfg.pedestrians.push_back({{x, -8.0 - 1.5 * i}, {{x, 12.0}}, 1.0, 0.25});
    cfg.pedestrians.push_back({{x + 0.5, 8.5 + 1.5 * i}, {{x + 0.5, -12.0}}, 1.0, 0.25});
  }
  return cfg;
}

ScenarioConfig random_crowd(const std::string& name, int count, Vec2 lo, Vec2 hi, Vec2 goal) {
  ScenarioConfig cfg = base(name, goal);
  RandomCrowd rc;
  rc.count = count;
  rc.region_min = lo;
  rc.region_max = hi;
  rc.legs = 4;
  rc.pref_speed = 1.0;
  cfg.random_crowd = rc;
  return cfg;
}

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
  return {
      corridor(),
      crossing(),
      random_crowd("random-5", 5, {2.0, -2.5}, {8.0, 2.5}, {10.0, 0.0}),
      random_crowd("random-10", 10, {1.0, -3.5}, {11.0, 3.5}, {12.0, 0.0}),
      head_on("1ped-3m", 3.0),
      head_on("1ped-4m", 4.0),
      perpendicular("ped-perp-3m", 3.0),
      perpendicular("ped-perp-4m", 4.0),
  };
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  for (ScenarioConfig& cfg : builtin_scenarios()) {
    if (cfg.name == key) {
      return cfg;
    }
  }
  return std::nullopt;
}

}  // namespace frozone
