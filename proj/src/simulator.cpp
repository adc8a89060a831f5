#include "frozone/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace frozone {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Frozen: return "frozen";
    case Outcome::Timeout: return "timeout";
  }
  return "unknown";
}

const char* to_string(PlannerKind k) { return k == PlannerKind::Hybrid ? "hybrid" : "baseline"; }

const char* to_string(PlannerBranch b) { return b == PlannerBranch::Frozone ? "Frozone" : "Baseline"; }

void ScenarioConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (name.empty()) fail("scenario: name must not be empty");
  if (runs < 1) fail("runs: must be >= 1");
  if (!(duration_limit > 0.0)) fail("duration_limit: must be > 0");
  if (pedestrians.empty() && !random_crowd && robot.goal == robot.position) {
    fail("pedestrians: need at least one pedestrian or a goal away from the start");
  }
  const auto prefixed = [&](const char* prefix, auto&& check) {
    try {
      check();
    } catch (const std::invalid_argument& e) {
      fail(std::string(prefix) + ": " + e.what());
    }
  };
  prefixed("robot", [&] { robot.validate(); });
  prefixed("sensing", [&] { sensing.validate(); });
  prefixed("lidar", [&] { lidar.validate(); });
  prefixed("frozone", [&] { frozone.validate(sensing.offset); });
  prefixed("planner", [&] { planner_params.validate(); });
  prefixed("pedestrian_model", [&] { fd.validate(); });
  for (std::size_t i = 0; i < pedestrians.size(); ++i) {
    const auto& p = pedestrians[i];
    const std::string where = "pedestrians[" + std::to_string(i) + "]";
    if (!(p.pref_speed > 0.0 && p.pref_speed <= 3.0)) fail(where + ".pref_speed: must be in (0, 3]");
    if (!(p.radius > 0.0 && p.radius <= 0.5)) fail(where + ".radius: must be in (0, 0.5]");
  }
  if (random_crowd) {
    const auto& rc = *random_crowd;
    if (rc.count < 0) fail("random_crowd.count: must be >= 0");
    if (rc.legs < 1) fail("random_crowd.legs: must be >= 1");
    if (!(rc.region_max.x > rc.region_min.x && rc.region_max.y > rc.region_min.y)) {
      fail("random_crowd.region: max must exceed min");
    }
    if (!(rc.pref_speed > 0.0 && rc.pref_speed <= 3.0)) fail("random_crowd.pref_speed: must be in (0, 3]");
  }
  if (!(sim.dt > 0.0)) fail("sim.dt: must be > 0");
  if (sim.dt > sensing.frame_dt) fail("sim.dt: must not exceed sensing.frame_dt");
  if (!(sim.goal_tolerance > 0.0)) fail("sim.goal_tolerance: must be > 0");
  if (!(sim.freeze_window > 0.0)) fail("sim.freeze_window: must be > 0");
  if (!(sim.wall_spacing > 0.0 && sim.wall_radius > 0.0)) fail("sim: wall spacing and radius must be > 0");
}

bool frp_predicate(std::span<const Vec2> peds_robot_frame, double omega, const SquareRegion& region) {
  std::vector<Vec2> in_region;
  for (const Vec2& p : peds_robot_frame) {
    if (region.contains(p)) {
      in_region.push_back(p);
    }
  }
  if (in_region.empty()) {
    return false;
  }
  for (const Vec2& p : in_region) {
    if (p.norm() > omega + kGeomTol) {
      return false;
    }
  }
  const auto chain_ok = [&](const std::vector<std::size_t>& order) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (!(dist(in_region[order[i - 1]], in_region[order[i]]) < 2.0 * omega)) {
        return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> order(in_region.size());
  std::iota(order.begin(), order.end(), 0);
  if (in_region.size() <= 8) {
    do {
      if (chain_ok(order)) {
        return true;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ba = std::atan2(in_region[a].y, in_region[a].x);
    const double bb = std::atan2(in_region[b].y, in_region[b].x);
    if (ba != bb) return ba < bb;
    return lex_less(in_region[a], in_region[b]);
  });
  return chain_ok(order);
}

bool freeze_detector(std::span<const PoseSample> window, const Vec2& goal, const SimParams& params) {
  if (window.size() < 2) {
    return false;
  }
  const PoseSample& first = window.front();
  const PoseSample& last = window.back();
  if (last.t - first.t < params.freeze_window - 1e-9) {
    return false;
  }
  return dist(first.position, last.position) < params.freeze_displacement &&
         dist(last.position, goal) > params.freeze_goal_margin;
}

namespace {

std::vector<PedestrianState> wall_discs(const std::vector<WallSegment>& walls, const SimParams& sim) {
  std::vector<PedestrianState> out;
  for (const WallSegment& w : walls) {
    const double len = dist(w.from, w.to);
    const int n = std::max(1, static_cast<int>(std::floor(len / sim.wall_spacing + 1e-9)));
    for (int i = 0; i <= n; ++i) {
      PedestrianState disc;
      disc.position = w.from + (w.to - w.from) * (static_cast<double>(i) / n);
      disc.radius = sim.wall_radius;
      disc.is_static = true;
      out.push_back(disc);
    }
  }
  return out;
}

PedestrianState from_script(const PedestrianScript& s) {
  PedestrianState p;
  p.position = s.start;
  p.pref_speed = s.pref_speed;
  p.radius = s.radius;
  p.waypoints = s.waypoints;
  if (!s.waypoints.empty()) {
    const Vec2 dir = normalized(s.waypoints.front() - s.start);
    if (dir.squared_norm() > 0.0) {
      p.forward = dir;
    }
  }
  return p;
}

}  // namespace

WorldState make_world(const ScenarioConfig& cfg, std::uint64_t seed) {
  WorldState world;
  world.robot = cfg.robot;
  for (const PedestrianScript& s : cfg.pedestrians) {
    world.pedestrians.push_back(from_script(s));
  }
  if (cfg.random_crowd) {
    const RandomCrowd& rc = *cfg.random_crowd;
    std::mt19937_64 crowd_rng(seed ^ 0x9E3779B97F4A7C15ULL);
    std::uniform_real_distribution<double> ux(rc.region_min.x, rc.region_max.x);
    std::uniform_real_distribution<double> uy(rc.region_min.y, rc.region_max.y);
    std::vector<Vec2> starts;
    for (int i = 0; i < rc.count; ++i) {
      Vec2 start;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        start = {ux(crowd_rng), uy(crowd_rng)};
        const bool clear_of_robot = dist(start, cfg.robot.position) >= rc.keep_out &&
                                    dist(start, cfg.robot.goal) >= rc.keep_out;
        const bool clear_of_peds = std::all_of(starts.begin(), starts.end(),
                                               [&](const Vec2& s) { return dist(s, start) >= 0.8; });
        if (clear_of_robot && clear_of_peds) {
          break;
        }
      }
      starts.push_back(start);
      PedestrianScript script{start, {}, rc.pref_speed, 0.25};
      for (int leg = 0; leg < rc.legs; ++leg) {
        script.waypoints.push_back({ux(crowd_rng), uy(crowd_rng)});
      }
      world.pedestrians.push_back(from_script(script));
    }
  }
  const auto walls = wall_discs(cfg.walls, cfg.sim);
  world.pedestrians.insert(world.pedestrians.end(), walls.begin(), walls.end());

  Bounds b{cfg.robot.position, cfg.robot.position};
  const auto grow = [&b](const Vec2& p) {
    b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y)};
    b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y)};
  };
  grow(cfg.robot.goal);
  for (const auto& p : world.pedestrians) {
    grow(p.position);
    for (const auto& w : p.waypoints) grow(w);
  }
  const Vec2 margin{cfg.sim.bounds_margin, cfg.sim.bounds_margin};
  world.bounds = {b.min - margin, b.max + margin};
  return world;
}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      seed_(seed),
      world_(make_world(cfg, seed)),
      rng_(seed),
      tracker_(cfg.sensing.motion_window, cfg.sensing.motion_min_frames),
      hybrid_(cfg.sensing, cfg.frozone, cfg.planner_params) {
  cfg_.validate();
  plan_every_ = std::max(1, static_cast<int>(std::lround(cfg_.sensing.frame_dt / cfg_.sim.dt)));
  for (std::size_t i = 0; i < world_.pedestrians.size(); ++i) {
    if (!world_.pedestrians[i].is_static) {
      moving_.push_back(i);
    }
  }
  encounters_.resize(moving_.size());
  track_metrics();
}

void Simulation::plan() {
  RobotState& robot = world_.robot;
  const SensorFrame camera = tracker_.update(
      sense(world_.pedestrians, world_.time, robot.pose(), cfg_.sensing, rng_));
  const SensorFrame obstacles = scan(world_.pedestrians, world_.time, robot.pose(), cfg_.lidar, rng_);

  TrajectorySample sample;
  sample.t = world_.time;
  sample.robot = robot.pose();

  Vec2 velocity;
  if (cfg_.planner == PlannerKind::Hybrid) {
    const HybridOutput out = hybrid_.step(robot, camera, obstacles, world_.time);
    velocity = out.velocity;
    sample.branch = out.choice.branch;
    sample.ped_count = out.choice.ped_count;
    if (out.frozone) {
      sample.pfz = out.frozone->pfz;
      sample.triggered = out.frozone->deviation.triggered;
      sample.phi = out.frozone->deviation.phi;
      sample.sweep_feasible = out.frozone->deviation.sweep_feasible;
      sample.lookahead = out.frozone->deviation.lookahead;
    }
  } else {
    velocity = baseline_velocity(robot, obstacles, cfg_.planner_params);
    sample.branch = PlannerBranch::Baseline;
    sample.ped_count = static_cast<int>(camera.observations.size());
  }
  cmd_ = to_unicycle(velocity, robot, cfg_.planner_params);
  sample.cmd_v = cmd_.v;
  sample.cmd_w = cmd_.w;

  std::vector<Vec2> local;
  for (std::size_t i : moving_) {
    sample.peds.push_back(world_.pedestrians[i].position);
    local.push_back(to_robot_frame(robot.pose(), world_.pedestrians[i].position));
  }
  sample.frp = frp_predicate(local, cfg_.frozone.min_dist_threshold,
                             SquareRegion{0.0, cfg_.sensing.side});
  frp_ticks_ += sample.frp ? 1 : 0;
  trajectory_.push_back(std::move(sample));

  pose_window_.push_back({world_.time, robot.position});
  while (pose_window_.size() > 2 &&
         world_.time - pose_window_[1].t >= cfg_.sim.freeze_window - 1e-9) {
    pose_window_.pop_front();
  }
  if (freeze_detector(std::vector<PoseSample>(pose_window_.begin(), pose_window_.end()), robot.goal,
                      cfg_.sim)) {
    froze_ = true;
    outcome_ = Outcome::Frozen;
  }
}

void Simulation::step() {
  if (done()) {
    return;
  }
  if (step_index_ % plan_every_ == 0) {
    plan();
    if (done()) {
      return;
    }
  }
  const double dt = cfg_.sim.dt;

  // Pedestrians update simultaneously from the pre-step state.
  std::vector<Disc> discs;
  discs.reserve(moving_.size() + 1);
  for (std::size_t i : moving_) {
    discs.push_back({world_.pedestrians[i].position, world_.pedestrians[i].radius});
  }
  discs.push_back({world_.robot.position, world_.robot.radius});
  std::vector<PedestrianState> next = world_.pedestrians;
  std::vector<Disc> others;
  for (std::size_t k = 0; k < moving_.size(); ++k) {
    const PedestrianState& ped = world_.pedestrians[moving_[k]];
    others.clear();
    for (std::size_t j = 0; j < discs.size(); ++j) {
      if (j != k) others.push_back(discs[j]);
    }
    const double space = front_space(ped, others, cfg_.sim.front_space_cap);
    next[moving_[k]] = step_pedestrian(ped, walking_speed(space, cfg_.fd, ped.pref_speed), dt);
  }
  world_.pedestrians = std::move(next);

  // Unicycle with acceleration limits.
  RobotState& r = world_.robot;
  const double dv = std::clamp(cmd_.v - r.lin_vel, -r.lin_accel * dt, r.lin_accel * dt);
  const double dw = std::clamp(cmd_.w - r.ang_vel, -r.ang_accel * dt, r.ang_accel * dt);
  r.lin_vel = std::clamp(r.lin_vel + dv, 0.0, r.v_max);
  r.ang_vel = std::clamp(r.ang_vel + dw, -r.w_max, r.w_max);
  const double mid = r.heading + 0.5 * r.ang_vel * dt;
  const Vec2 delta = Vec2{std::cos(mid), std::sin(mid)} * (r.lin_vel * dt);
  r.position += delta;
  r.heading = wrap_angle(r.heading + r.ang_vel * dt);
  path_length_ += delta.norm();

  ++step_index_;
  world_.time = step_index_ * dt;
  track_metrics();
  check_termination();
}

void Simulation::track_metrics() {
  const RobotState& r = world_.robot;
  for (std::size_t k = 0; k < moving_.size(); ++k) {
    const PedestrianState& ped = world_.pedestrians[moving_[k]];
    const double d = dist(r.position, ped.position);
    if (d < encounters_[k].min_dist) {
      encounters_[k].min_dist = d;
      encounters_[k].behind = dot(r.position - ped.position, ped.forward) < 0.0;
    }
  }
}

void Simulation::check_termination() {
  const RobotState& r = world_.robot;
  for (const PedestrianState& p : world_.pedestrians) {
    if (dist(r.position, p.position) < r.radius + p.radius) {
      outcome_ = Outcome::Collision;
      return;
    }
  }
  if (dist(r.position, r.goal) <= cfg_.sim.goal_tolerance) {
    outcome_ = Outcome::Success;
    time_to_goal_ = world_.time;
    return;
  }
  if (world_.time >= cfg_.duration_limit - 1e-9 || !world_.bounds.contains(r.position)) {
    outcome_ = Outcome::Timeout;
  }
}

RunReport Simulation::run() {
  while (!done()) {
    step();
  }
  RunReport report;
  report.seed = seed_;
  report.outcome = *outcome_;
  report.time_to_goal = time_to_goal_;
  report.duration = world_.time;
  report.avg_speed = world_.time > 0.0 ? path_length_ / world_.time : 0.0;
  report.froze = froze_;
  report.frp_ticks = frp_ticks_;

  // Pedestrian-friendliness: N∞ when every pedestrian approached within η
  // was passed behind, otherwise the minimum pedestrian distance.
  double min_dist = std::numeric_limits<double>::infinity();
  bool passed_behind = true;
  for (const Encounter& e : encounters_) {
    min_dist = std::min(min_dist, e.min_dist);
    if (e.min_dist <= cfg_.frozone.eta && !e.behind) {
      passed_behind = false;
    }
  }
  report.min_ped_dist = encounters_.empty() ? 0.0 : min_dist;
  report.pf = passed_behind ? cfg_.sim.pf_n_inf : min_dist;
  report.trajectory = std::move(trajectory_);
  return report;
}

RunReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  return Simulation(cfg, seed).run();
}

Aggregate aggregate(std::span<const RunReport> runs) {
  Aggregate a;
  a.runs = static_cast<int>(runs.size());
  if (runs.empty()) {
    return a;
  }
  int success = 0, collision = 0, frozen = 0, timeout = 0;
  double time_sum = 0.0, speed_sum = 0.0, pf_sum = 0.0;
  for (const RunReport& r : runs) {
    switch (r.outcome) {
      case Outcome::Success:
        ++success;
        time_sum += *r.time_to_goal;
        speed_sum += r.avg_speed;
        break;
      case Outcome::Collision: ++collision; break;
      case Outcome::Frozen: ++frozen; break;
      case Outcome::Timeout: ++timeout; break;
    }
    pf_sum += r.pf;
  }
  const double n = static_cast<double>(runs.size());
  a.success_rate = success / n;
  a.collision_rate = collision / n;
  a.freezing_rate = frozen / n;
  a.timeout_rate = timeout / n;
  if (success > 0) {
    a.mean_time = time_sum / success;
    a.avg_velocity = speed_sum / success;
  }
  a.mean_pf = pf_sum / n;
  return a;
}

BatchResult run_batch(const ScenarioConfig& cfg, int n_seeds) {
  if (n_seeds < 1) {
    throw std::invalid_argument("runs: must be >= 1");
  }
  cfg.validate();
  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                 static_cast<unsigned>(n_seeds)));
  BatchResult result;
  result.runs.resize(n_seeds);
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int i = static_cast<int>(w); i < n_seeds; i += static_cast<int>(workers)) {
        result.runs[i] = run_scenario(cfg, cfg.seed + static_cast<std::uint64_t>(i));
      }
    }));
  }
  for (auto& j : jobs) {
    j.get();
  }
  result.aggregate = aggregate(result.runs);
  return result;
}

}  // namespace frozone
