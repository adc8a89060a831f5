#include "frozone/pedestrian_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frozone {

void FdParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(height_factor > 0.0)) throw std::invalid_argument("height_factor must be > 0");
}

void PedestrianState::validate() const {
  if (!(radius > 0.0 && radius <= 0.5)) {
    throw std::invalid_argument("pedestrian radius must be in (0, 0.5]");
  }
  if (is_static) {
    return;
  }
  if (!(pref_speed > 0.0 && pref_speed <= 3.0)) {
    throw std::invalid_argument("pref_speed must be in (0, 3]");
  }
  if (std::abs(forward.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("pedestrian forward vector must be unit length");
  }
}

double walking_speed(double front_space, const FdParams& params, double pref_speed) {
  if (front_space < 0.0) {
    throw std::invalid_argument("front space must be >= 0");
  }
  const double root = front_space * params.alpha / (params.height_factor * (1.0 + params.beta));
  return std::min(pref_speed, root * root);
}

double front_space(const PedestrianState& ped, std::span<const Disc> others, double cap) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const Disc& d : others) {
    // The pedestrian's body sweeps along the ray: p + t·u against |x - c| = r + r_ped.
    const Vec2 rel = d.center - ped.position;
    const double along = dot(rel, ped.forward);
    if (along <= 0.0) {
      continue;  // behind or level with the pedestrian
    }
    const double reach = d.radius + ped.radius;
    const double disc2 = along * along - (rel.squared_norm() - reach * reach);
    if (disc2 < 0.0) {
      continue;
    }
    nearest = std::min(nearest, std::max(0.0, along - std::sqrt(disc2)));
  }
  return std::clamp(nearest, 0.0, cap);
}

PedestrianState step_pedestrian(const PedestrianState& ped, double speed, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("dt must be > 0");
  }
  PedestrianState next = ped;
  if (next.is_static) {
    return next;
  }
  const auto skip_reached = [&] {
    while (!next.finished() &&
           dist(next.position, next.waypoints[next.waypoint_index]) < kWaypointReachedDist) {
      ++next.waypoint_index;
    }
  };
  skip_reached();
  if (next.finished()) {
    return next;
  }
  const Vec2 to_wp = next.waypoints[next.waypoint_index] - next.position;
  const double remaining = to_wp.norm();
  next.forward = to_wp / remaining;
  next.position += next.forward * std::min(std::max(speed, 0.0) * dt, remaining);
  skip_reached();
  return next;
}

}  // namespace frozone
