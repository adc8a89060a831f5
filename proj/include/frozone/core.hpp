#pragma once

// Frozone: classify potentially-freezing pedestrians, predict their positions,
// build the potential freezing zone (PFZ) and rotate the guiding velocity away
// from it by a bounded deviation angle.

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "frozone/geometry.hpp"
#include "frozone/sensing.hpp"

namespace frozone {

struct FrozoneConfig {
  double eta{1.4};                  ///< comfort distance, m
  double pred_dt{1.0};              ///< prediction horizon, s
  double single_ped_radius{1.2};    ///< PFZ circle radius when K = 1, m
  double segment_inflation{0.4};    ///< PFZ stadium half-width when K = 2 or collinear, m
  double sweep_step{std::numbers::pi / 180.0};
  double min_dist_threshold{0.5};   ///< Ω, m
  double head_on_band{0.3};         ///< |y| band for the along-axis case, m
  /// Max angle between a velocity and the ±x axis for the along-axis case.
  double axis_tolerance{std::numbers::pi / 8.0};
  /// Goal distances closer than this are ties when picking φ₁, m.
  double goal_tie_tolerance{0.1};
  /// Seconds the last deviated heading is kept after a trigger; 0 disables.
  double deviation_hold{2.0};

  /// `sensing_offset` is f; eta must exceed it for the deviation bound to exist.
  void validate(double sensing_offset) const;
};

/// atan(√(η² − f²) / f): the largest deviation magnitude Frozone will emit.
double max_deviation(double eta, double sensing_offset);

enum class PedClass { PotentiallyFreezing, NonFreezing };

struct Label {
  int id{0};
  PedClass cls{PedClass::NonFreezing};
  friend bool operator==(const Label&, const Label&) = default;
};

/// One label per observation, in frame order.
using Classification = std::vector<Label>;

/// Unknown motion counts as a stationary pedestrian.
Classification classify(const SensorFrame& frame, double robot_speed, const FrozoneConfig& cfg);

/// p + v·pred_dt for every potentially-freezing pedestrian, in frame order.
std::vector<Vec2> predict(const SensorFrame& frame, const Classification& labels, double pred_dt);

/// None for K = 0, circle for K = 1, stadium for K = 2 or collinear, else hull.
std::optional<Pfz> build_pfz(std::span<const Vec2> predicted, const FrozoneConfig& cfg);

/// Both trigger clauses: the lookahead v·Δt is within η of the closest
/// predicted pedestrian and lies inside the PFZ.
bool should_deviate(const Vec2& robot_vel, const Pfz& pfz, const Vec2& closest_pred,
                    const FrozoneConfig& cfg);

enum class DeviationBranch { None, Phi1, Phi2 };

struct DeviationResult {
  bool triggered{false};
  double phi{0.0};
  DeviationBranch chosen_branch{DeviationBranch::None};
  Vec2 new_velocity;
  /// The sweep contained at least one angle whose lookahead leaves the PFZ.
  bool sweep_feasible{false};
  std::optional<double> phi1;  ///< best feasible sweep angle
  std::optional<double> phi2;  ///< bearing of the closest pedestrian, if nonzero
  Vec2 lookahead;              ///< rotated lookahead new_velocity·Δt
};

/// Bounded deviation. φ₁ is the sweep angle (|φ| ≤ max_deviation) whose
/// rotated lookahead is outside the PFZ and nearest the goal; φ₂ is the
/// bearing of the closest pedestrian's current position, admitted only when
/// it is within the bound and also clears the PFZ. The smaller magnitude wins.
/// With no feasible angle, the sweep angle of greatest clearance is used.
DeviationResult deviation_angle(const Vec2& robot_vel, const Vec2& goal, const Pfz& pfz,
                                const Vec2& closest_ped_current, const FrozoneConfig& cfg,
                                double sensing_offset);

struct FrozoneStep {
  Vec2 velocity;
  int freezing_count{0};
  std::optional<Pfz> pfz;
  DeviationResult deviation;
};

/// classify → predict → build_pfz → should_deviate → deviation_angle.
/// `goal` and `guiding_vel` are in the robot frame.
FrozoneStep frozone_step(const SensorFrame& frame, double robot_speed, const Vec2& goal,
                         const Vec2& guiding_vel, const FrozoneConfig& cfg, double sensing_offset);

}  // namespace frozone
