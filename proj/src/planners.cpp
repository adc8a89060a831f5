#include "frozone/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace frozone {

void RobotState::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("robot.radius must be > 0");
  if (!(v_max > 0.0)) throw std::invalid_argument("robot.v_max must be > 0");
  if (!(w_max > 0.0)) throw std::invalid_argument("robot.w_max must be > 0");
  if (lin_vel < 0.0 || lin_vel > v_max) throw std::invalid_argument("robot.lin_vel must be in [0, v_max]");
  if (std::abs(ang_vel) > w_max) throw std::invalid_argument("robot.ang_vel must be within w_max");
  if (!(lin_accel > 0.0 && ang_accel > 0.0)) throw std::invalid_argument("robot accelerations must be > 0");
}

void PlannerConfig::validate() const {
  if (v_samples < 2 || w_samples < 2) throw std::invalid_argument("planner sample counts must be >= 2");
  if (!(horizon > 0.0 && rollout_dt > 0.0)) {
    throw std::invalid_argument("planner horizon and rollout_dt must be > 0");
  }
  if (!(min_clearance >= 0.0)) throw std::invalid_argument("planner.min_clearance must be >= 0");
  if (!(clearance_cap > 0.0)) throw std::invalid_argument("planner.clearance_cap must be > 0");
  if (!(heading_gain > 0.0)) throw std::invalid_argument("planner.heading_gain must be > 0");
  if (w_goal < 0.0 || w_clear < 0.0 || w_vel < 0.0) {
    throw std::invalid_argument("planner weights must be >= 0");
  }
}

namespace {

// Clearance of a robot-frame point to the nearest observed disc surface,
// discs grown by the robot radius.
double clearance_at(const Vec2& p, const RobotState& robot, const SensorFrame& obstacles) {
  double c = std::numeric_limits<double>::infinity();
  for (const Observation& o : obstacles.observations) {
    c = std::min(c, dist(p, o.position) - o.radius - robot.radius);
  }
  return c;
}

// Already inside the clearance band: accept rollouts that do not get closer.
double clearance_limit(const RobotState& robot, const SensorFrame& obstacles, const PlannerConfig& cfg) {
  return std::min(cfg.min_clearance, clearance_at(Vec2{}, robot, obstacles));
}

struct Rollout {
  Vec2 end;
  double heading{0.0};
  double min_clear{std::numeric_limits<double>::infinity()};
};

// Starts from the current velocities and approaches `cmd` at the
// acceleration limits. Stops early once the clearance drops below `limit`.
Rollout roll_out(const RobotState& robot, const SensorFrame& obstacles, const VelocityCommand& cmd,
                 const PlannerConfig& cfg, double limit) {
  const int steps = std::max(1, static_cast<int>(std::lround(cfg.horizon / cfg.rollout_dt)));
  const double dv = robot.lin_accel * cfg.rollout_dt;
  const double dw = robot.ang_accel * cfg.rollout_dt;
  double v = robot.lin_vel;
  double w = robot.ang_vel;
  Rollout r;
  for (int s = 0; s < steps && r.min_clear >= limit; ++s) {
    v += std::clamp(cmd.v - v, -dv, dv);
    w += std::clamp(cmd.w - w, -dw, dw);
    r.end += Vec2{std::cos(r.heading), std::sin(r.heading)} * (v * cfg.rollout_dt);
    r.heading += w * cfg.rollout_dt;
    r.min_clear = std::min(r.min_clear, clearance_at(r.end, robot, obstacles));
  }
  return r;
}

}  // namespace

bool admissible(const RobotState& robot, const SensorFrame& obstacles, const VelocityCommand& cmd,
                const PlannerConfig& cfg) {
  const double limit = clearance_limit(robot, obstacles, cfg);
  return roll_out(robot, obstacles, cmd, cfg, limit).min_clear >= limit;
}

VelocityCommand baseline_command(const RobotState& robot, const SensorFrame& obstacles,
                                 const PlannerConfig& cfg) {
  const Vec2 goal = to_robot_frame(robot.pose(), robot.goal);
  const double limit = clearance_limit(robot, obstacles, cfg);

  VelocityCommand best{};
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.v_samples; ++i) {
    const double v = robot.v_max * i / (cfg.v_samples - 1);
    for (int j = 0; j < cfg.w_samples; ++j) {
      const double w = -robot.w_max + 2.0 * robot.w_max * j / (cfg.w_samples - 1);
      const Rollout r = roll_out(robot, obstacles, {v, w}, cfg, limit);
      if (r.min_clear < limit) {
        continue;
      }
      const Vec2 to_goal = goal - r.end;
      const double heading_err =
          to_goal.norm() < kGeomTol ? 0.0 : std::abs(wrap_angle(std::atan2(to_goal.y, to_goal.x) - r.heading));
      const double align = 1.0 - heading_err / std::numbers::pi;
      const double clear = std::min(r.min_clear, cfg.clearance_cap) / cfg.clearance_cap;
      const double score = cfg.w_goal * align + cfg.w_clear * clear + cfg.w_vel * v / robot.v_max;
      if (score > best_score + 1e-12) {
        best_score = score;
        best = {v, w};
      }
    }
  }
  return best;
}

Vec2 baseline_velocity(const RobotState& robot, const SensorFrame& obstacles,
                       const PlannerConfig& cfg) {
  return to_velocity_vector(baseline_command(robot, obstacles, cfg), cfg);
}

Vec2 to_velocity_vector(const VelocityCommand& cmd, const PlannerConfig& cfg) {
  const double angle = cmd.w / cfg.heading_gain;
  return Vec2{std::cos(angle), std::sin(angle)} * cmd.v;
}

VelocityCommand to_unicycle(const Vec2& velocity, const RobotState& robot,
                            const PlannerConfig& cfg) {
  const double speed = std::min(velocity.norm(), robot.v_max);
  if (speed < kGeomTol) {
    return {};
  }
  const double angle = std::atan2(velocity.y, velocity.x);
  const double w = std::clamp(cfg.heading_gain * angle, -robot.w_max, robot.w_max);
  const double v = std::abs(angle) <= std::numbers::pi / 2.0 ? speed : 0.0;
  return {v, w};
}

PlannerChoice hybrid_select(const SensorFrame& frame, double sensing_side) {
  PlannerChoice choice;
  choice.ped_count = static_cast<int>(frame.observations.size());
  choice.threshold = static_cast<int>(std::floor(sensing_side * sensing_side + 1e-9));
  choice.branch = choice.ped_count <= choice.threshold ? PlannerBranch::Frozone : PlannerBranch::Baseline;
  return choice;
}

HybridOutput hybrid_step(const RobotState& robot, const SensorFrame& camera,
                         const SensorFrame& obstacles, const SensorConfig& sensing,
                         const FrozoneConfig& frozone_cfg, const PlannerConfig& planner_cfg) {
  HybridOutput out;
  out.guiding = baseline_velocity(robot, obstacles, planner_cfg);
  out.velocity = out.guiding;
  out.choice = hybrid_select(camera, sensing.side);
  if (out.choice.branch == PlannerBranch::Frozone) {
    const Vec2 goal = to_robot_frame(robot.pose(), robot.goal);
    out.frozone = frozone_step(camera, robot.lin_vel, goal, out.guiding, frozone_cfg, sensing.offset);
    out.velocity = out.frozone->velocity;
  }
  return out;
}

HybridOutput HybridController::step(const RobotState& robot, const SensorFrame& camera,
                                    const SensorFrame& obstacles, double time) {
  HybridOutput out = hybrid_step(robot, camera, obstacles, sensing_, frozone_, planner_);
  if (out.choice.branch != PlannerBranch::Frozone) {
    hold_until_ = -1.0;
    return out;
  }
  const bool triggered = out.frozone && out.frozone->deviation.triggered;
  const bool holding = time < hold_until_ - 1e-9;
  // A trigger that turns to the other side mid-hold keeps the held side.
  const bool flip = holding && triggered && out.frozone->deviation.phi * hold_sign_ < 0.0;
  if (triggered && out.velocity.norm() > kGeomTol && !flip) {
    hold_dir_ = rotate(out.velocity, robot.heading);
    hold_sign_ = out.frozone->deviation.phi;
    hold_until_ = time + frozone_.deviation_hold;
  } else if (holding) {
    out.velocity = rotate(hold_dir_, -robot.heading);
    out.held = true;
  }
  if ((triggered || out.held) &&
      !admissible(robot, obstacles, to_unicycle(out.velocity, robot, planner_), planner_)) {
    out.velocity = out.guiding;
    out.vetoed = true;
  }
  return out;
}

}  // namespace frozone
