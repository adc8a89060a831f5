#pragma once

// Pedestrian speed law (fundamental diagram), perceived front space and the
// scripted waypoint follower that moves ground-truth pedestrians.

#include <cstddef>
#include <span>
#include <vector>

#include "frozone/geometry.hpp"

namespace frozone {

/// Constants of the fundamental-diagram speed law. Shared by all pedestrians.
struct FdParams {
  double alpha{1.0};
  double beta{0.6};
  double height_factor{1.0};  ///< height / 1.72

  void validate() const;
};

inline constexpr double kDefaultPrefSpeed = 1.3;
inline constexpr double kDefaultFrontSpaceCap = 4.0;
inline constexpr double kWaypointReachedDist = 0.1;

struct PedestrianState {
  Vec2 position;
  Vec2 forward{1.0, 0.0};
  double pref_speed{kDefaultPrefSpeed};
  double radius{0.25};
  std::vector<Vec2> waypoints;
  std::size_t waypoint_index{0};
  /// Fixed obstacle (a wall disc). Never moves; not a person, so the
  /// pedestrian detector ignores it and it does not enter pedestrian metrics.
  bool is_static{false};

  bool finished() const { return waypoint_index >= waypoints.size(); }
  void validate() const;
};

struct Disc {
  Vec2 center;
  double radius{0.0};
};

/// min(pref_speed, (S·α / (H·(1+β)))²). Throws on negative front space.
double walking_speed(double front_space, const FdParams& params, double pref_speed);

/// Distance the pedestrian can walk along its forward direction before its
/// disc touches another disc ahead of it, clamped to [0, cap]. Head-on this is
/// the gap between the two discs.
double front_space(const PedestrianState& ped, std::span<const Disc> others, double cap);

/// Advances one pedestrian toward its current waypoint without overshooting it.
PedestrianState step_pedestrian(const PedestrianState& ped, double speed, double dt);

}  // namespace frozone
