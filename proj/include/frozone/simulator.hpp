#pragma once

// Deterministic world stepping, scenario catalog, freeze detection and the
// run metrics (success, freezing, pedestrian-friendliness).

#include <cstdint>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "frozone/core.hpp"
#include "frozone/geometry.hpp"
#include "frozone/pedestrian_model.hpp"
#include "frozone/planners.hpp"
#include "frozone/sensing.hpp"

namespace frozone {

struct PedestrianScript {
  Vec2 start;
  std::vector<Vec2> waypoints;
  double pref_speed{kDefaultPrefSpeed};
  double radius{0.25};
};

/// Straight wall, realized as static discs spaced along it.
struct WallSegment {
  Vec2 from;
  Vec2 to;
};

/// Pedestrians with start and waypoints drawn uniformly in a rectangle from
/// the run seed.
struct RandomCrowd {
  int count{0};
  Vec2 region_min;
  Vec2 region_max;
  int legs{4};
  double pref_speed{kDefaultPrefSpeed};
  /// Starts closer than this to the robot start are redrawn.
  double keep_out{1.5};
};

struct SimParams {
  double dt{0.05};
  double goal_tolerance{0.3};
  double freeze_window{10.0};
  double freeze_displacement{0.2};
  double freeze_goal_margin{0.5};
  double pf_n_inf{10.0};
  double front_space_cap{kDefaultFrontSpaceCap};
  double wall_spacing{0.5};
  double wall_radius{0.25};
  double bounds_margin{10.0};
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed{1};
  int runs{1};
  double duration_limit{120.0};
  PlannerKind planner{PlannerKind::Hybrid};
  RobotState robot;  ///< start pose, goal and limits
  std::vector<PedestrianScript> pedestrians;
  std::vector<WallSegment> walls;
  std::optional<RandomCrowd> random_crowd;
  SensorConfig sensing;
  RangeSensorConfig lidar;
  FrozoneConfig frozone;
  PlannerConfig planner_params;
  FdParams fd;
  SimParams sim;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class Outcome { Success, Collision, Frozen, Timeout };

struct Bounds {
  Vec2 min;
  Vec2 max;
  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct WorldState {
  double time{0.0};
  RobotState robot;
  std::vector<PedestrianState> pedestrians;  ///< wall discs included, flagged static
  Bounds bounds;
};

/// One control tick.
struct TrajectorySample {
  double t{0.0};
  Pose2 robot;
  double cmd_v{0.0};
  double cmd_w{0.0};
  PlannerBranch branch{PlannerBranch::Baseline};
  int ped_count{0};           ///< T, pedestrians in the camera frame
  bool triggered{false};
  double phi{0.0};
  bool sweep_feasible{false};
  bool frp{false};
  std::optional<Pfz> pfz;     ///< robot frame at this tick
  Vec2 lookahead;             ///< post-deviation lookahead, robot frame
  std::vector<Vec2> peds;     ///< world positions of moving pedestrians
};

struct RunReport {
  std::uint64_t seed{0};
  Outcome outcome{Outcome::Timeout};
  std::optional<double> time_to_goal;
  double duration{0.0};
  double avg_speed{0.0};
  double pf{0.0};
  double min_ped_dist{0.0};
  bool froze{false};
  int frp_ticks{0};
  std::vector<TrajectorySample> trajectory;
};

struct Aggregate {
  int runs{0};
  double success_rate{0.0};
  double collision_rate{0.0};
  double freezing_rate{0.0};
  double timeout_rate{0.0};
  std::optional<double> mean_time;     ///< over successful runs
  std::optional<double> avg_velocity;  ///< over successful runs
  double mean_pf{0.0};
};

struct BatchResult {
  std::vector<RunReport> runs;  ///< sorted by seed
  Aggregate aggregate;
};

/// Square region in front of the robot used by the FRP predicate.
struct SquareRegion {
  double offset{0.0};
  double side{3.0};
  bool contains(const Vec2& p) const {
    return p.x >= offset && p.x <= offset + side && std::abs(p.y) <= side / 2.0;
  }
};

/// Freezing configuration test on robot-frame pedestrian positions: some
/// ordering of the in-region pedestrians has consecutive gaps < 2Ω with every
/// one within Ω of the robot. Exhaustive over orderings up to 8 pedestrians,
/// greedy nearest-neighbour by bearing beyond.
bool frp_predicate(std::span<const Vec2> peds_robot_frame, double omega, const SquareRegion& region);

struct PoseSample {
  double t{0.0};
  Vec2 position;
};

/// True iff `window` spans the full freeze window, the net displacement over it
/// is below the threshold, and the goal is still beyond the margin.
bool freeze_detector(std::span<const PoseSample> window, const Vec2& goal, const SimParams& params);

/// Owns one run: world, sensing RNG, tracker and metric accumulators.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed);

  /// Advances by one sim step (re-planning on frame boundaries).
  void step();
  bool done() const { return outcome_.has_value(); }
  const WorldState& world() const { return world_; }
  /// Runs to completion and returns the report.
  RunReport run();

 private:
  void plan();
  void check_termination();
  void track_metrics();

  ScenarioConfig cfg_;
  std::uint64_t seed_;
  WorldState world_;
  std::mt19937_64 rng_;
  MotionTracker tracker_;
  long step_index_{0};
  int plan_every_{1};
  VelocityCommand cmd_;
  HybridController hybrid_;
  std::optional<Outcome> outcome_;
  std::optional<double> time_to_goal_;
  bool froze_{false};
  double path_length_{0.0};
  std::deque<PoseSample> pose_window_;
  std::vector<TrajectorySample> trajectory_;
  int frp_ticks_{0};

  struct Encounter {
    double min_dist{std::numeric_limits<double>::infinity()};
    bool behind{false};
  };
  std::vector<std::size_t> moving_;  ///< indices of non-static pedestrians
  std::vector<Encounter> encounters_;
};

/// Expands walls and the random crowd for `seed` into an initial world.
WorldState make_world(const ScenarioConfig& cfg, std::uint64_t seed);

RunReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Seeds cfg.seed … cfg.seed + n_seeds − 1, dispatched to worker threads.
BatchResult run_batch(const ScenarioConfig& cfg, int n_seeds);

Aggregate aggregate(std::span<const RunReport> runs);

/// Catalog: corridor, crossing, random-5, random-10, 1ped-3m, 1ped-4m,
/// ped-perp-3m, ped-perp-4m.
std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);

const char* to_string(Outcome o);
const char* to_string(PlannerKind k);
const char* to_string(PlannerBranch b);

}  // namespace frozone
