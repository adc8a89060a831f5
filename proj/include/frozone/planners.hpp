#pragma once

// Guiding-velocity source (a dynamic-window sampler standing in for a learned
// policy) and the density switch that decides whether Frozone post-processes
// its output.

#include <optional>

#include "frozone/core.hpp"
#include "frozone/geometry.hpp"
#include "frozone/sensing.hpp"

namespace frozone {

struct RobotState {
  Vec2 position;        ///< world, m
  double heading{0.0};  ///< world, rad
  double lin_vel{0.0};
  double ang_vel{0.0};
  Vec2 goal;            ///< world, m
  double radius{0.3};
  double v_max{0.6};
  double w_max{1.5};
  double lin_accel{0.5};  ///< m/s²
  double ang_accel{3.0};  ///< rad/s²

  Pose2 pose() const { return {position, heading}; }
  void validate() const;
};

struct PlannerConfig {
  double w_goal{2.0};
  double w_clear{1.0};
  double w_vel{0.5};
  int v_samples{11};
  int w_samples{21};
  double horizon{1.0};          ///< rollout length, s
  double rollout_dt{0.1};
  double min_clearance{0.2};    ///< samples whose rollout gets closer are discarded
  double clearance_cap{2.0};    ///< clearance score saturates here
  double heading_gain{2.0};     ///< proportional heading controller, 1/s

  void validate() const;
};

enum class PlannerKind { Baseline, Hybrid };
enum class PlannerBranch { Frozone, Baseline };

struct VelocityCommand {
  double v{0.0};
  double w{0.0};
};

/// Best (v, ω) of the sampled window as a robot-frame velocity vector whose
/// direction encodes ω through the heading controller. Zero when every
/// sample violates the clearance limit.
Vec2 baseline_velocity(const RobotState& robot, const SensorFrame& obstacles,
                       const PlannerConfig& cfg);

/// Same search, returned as the raw (v, ω) pair.
VelocityCommand baseline_command(const RobotState& robot, const SensorFrame& obstacles,
                                 const PlannerConfig& cfg);

/// True when the rollout of `cmd` keeps the sampler's clearance: at least
/// min_clearance, or no closer than now when already inside that band.
bool admissible(const RobotState& robot, const SensorFrame& obstacles, const VelocityCommand& cmd,
                const PlannerConfig& cfg);

/// Robot-frame velocity vector → unicycle command: speed is kept, heading error
/// is driven by a saturated proportional controller, and anything pointing
/// backwards stops the robot while it turns.
VelocityCommand to_unicycle(const Vec2& velocity, const RobotState& robot,
                            const PlannerConfig& cfg);

/// Inverse of to_unicycle for |ω| below saturation.
Vec2 to_velocity_vector(const VelocityCommand& cmd, const PlannerConfig& cfg);

struct PlannerChoice {
  PlannerBranch branch{PlannerBranch::Frozone};
  int ped_count{0};
  int threshold{0};
};

/// Frozone while the pedestrian count T ≤ ⌊s_sen²⌋, the guiding planner alone above.
PlannerChoice hybrid_select(const SensorFrame& frame, double sensing_side);

struct HybridOutput {
  Vec2 velocity;
  Vec2 guiding;
  PlannerChoice choice;
  std::optional<FrozoneStep> frozone;  ///< set when the Frozone branch ran
  bool held{false};     ///< velocity follows an earlier deviation
  bool vetoed{false};   ///< deviated velocity failed the clearance test; guiding used
};

/// Guiding velocity from the range scan, post-processed by Frozone on the
/// camera frame when the density switch allows it.
HybridOutput hybrid_step(const RobotState& robot, const SensorFrame& camera,
                         const SensorFrame& obstacles, const SensorConfig& sensing,
                         const FrozoneConfig& frozone_cfg, const PlannerConfig& planner_cfg);

/// hybrid_step with memory. After a trigger the deviated velocity (world
/// frame) is kept for FrozoneConfig::deviation_hold seconds while the Frozone
/// branch stays active. A trigger to the other side during a hold keeps the
/// held side. Any deviated or held velocity whose rollout fails `admissible`
/// is replaced by the guiding velocity.
class HybridController {
 public:
  HybridController(SensorConfig sensing, FrozoneConfig frozone, PlannerConfig planner)
      : sensing_(sensing), frozone_(frozone), planner_(planner) {}

  HybridOutput step(const RobotState& robot, const SensorFrame& camera, const SensorFrame& obstacles,
                    double time);

 private:
  SensorConfig sensing_;
  FrozoneConfig frozone_;
  PlannerConfig planner_;
  double hold_until_{-1.0};
  Vec2 hold_dir_;  ///< deviated velocity, world frame
  double hold_sign_{0.0};
};

}  // namespace frozone
