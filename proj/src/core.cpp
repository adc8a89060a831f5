#include "frozone/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace frozone {

namespace {
constexpr double kCmpTol = 1e-12;
}  // namespace

void FrozoneConfig::validate(double sensing_offset) const {
  if (!(eta > sensing_offset)) throw std::invalid_argument("eta must be > f (sensing.offset)");
  if (!(pred_dt > 0.0)) throw std::invalid_argument("pred_dt must be > 0");
  if (!(single_ped_radius > 0.0)) throw std::invalid_argument("single_ped_radius must be > 0");
  if (!(segment_inflation > 0.0)) throw std::invalid_argument("segment_inflation must be > 0");
  if (!(sweep_step > 0.0 && sweep_step <= 0.1)) {
    throw std::invalid_argument("sweep_step must be in (0, 0.1]");
  }
  if (!(min_dist_threshold > 0.0)) throw std::invalid_argument("min_dist_threshold must be > 0");
  if (!(head_on_band >= 0.0)) throw std::invalid_argument("head_on_band must be >= 0");
  if (!(axis_tolerance >= 0.0 && axis_tolerance < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("axis_tolerance must be in [0, pi/4)");
  }
  if (!(goal_tie_tolerance >= 0.0)) throw std::invalid_argument("goal_tie_tolerance must be >= 0");
  if (!(deviation_hold >= 0.0)) throw std::invalid_argument("deviation_hold must be >= 0");
}

double max_deviation(double eta, double sensing_offset) {
  return std::atan(std::sqrt(eta * eta - sensing_offset * sensing_offset) / sensing_offset);
}

Classification classify(const SensorFrame& frame, double robot_speed, const FrozoneConfig& cfg) {
  Classification labels;
  labels.reserve(frame.observations.size());
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (const Observation& obs : frame.observations) {
    const Vec2 vel = obs.velocity();
    const double v = obs.speed.value_or(0.0);
    const Vec2& p = obs.position;

    const bool lateral_ok = std::abs(vel.x) <= v * inv_sqrt2 + kCmpTol;
    const bool right_cone =
        p.y < 0.0 && lateral_ok && vel.y >= v * inv_sqrt2 - kCmpTol && vel.y <= v + kCmpTol;
    const bool left_cone =
        p.y > 0.0 && lateral_ok && vel.y <= -v * inv_sqrt2 + kCmpTol && vel.y >= -v - kCmpTol;
    const bool slower = v < robot_speed;
    // Distance by which the pedestrian's straight-line path misses the robot;
    // equals |p.y| for velocities exactly along the X-axis.
    const double miss = v > 0.0 ? std::abs(cross(p, vel)) / v : std::abs(p.y);
    const bool along_axis = v > 0.0 && miss <= cfg.head_on_band &&
                            std::abs(vel.y) <= v * std::sin(cfg.axis_tolerance);

    const bool freezing = right_cone || left_cone || slower || along_axis;
    labels.push_back({obs.id, freezing ? PedClass::PotentiallyFreezing : PedClass::NonFreezing});
  }
  return labels;
}

std::vector<Vec2> predict(const SensorFrame& frame, const Classification& labels, double pred_dt) {
  if (!(pred_dt > 0.0)) {
    throw std::invalid_argument("pred_dt must be > 0");
  }
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < frame.observations.size() && i < labels.size(); ++i) {
    if (labels[i].cls != PedClass::PotentiallyFreezing) {
      continue;
    }
    const Observation& obs = frame.observations[i];
    out.push_back(obs.position + obs.velocity() * pred_dt);
  }
  return out;
}

std::optional<Pfz> build_pfz(std::span<const Vec2> predicted, const FrozoneConfig& cfg) {
  if (predicted.empty()) {
    return std::nullopt;
  }
  if (predicted.size() == 1) {
    return Circle{predicted.front(), cfg.single_ped_radius};
  }
  const Hull hull = convex_hull(predicted);
  if (const auto* poly = std::get_if<ConvexPolygon>(&hull)) {
    return *poly;
  }
  if (const auto* seg = std::get_if<Segment>(&hull)) {
    return InflatedSegment{seg->a, seg->b, cfg.segment_inflation};
  }
  // Coincident predictions collapse to a point; treat as a single pedestrian.
  return Circle{std::get<Vec2>(hull), cfg.single_ped_radius};
}

bool should_deviate(const Vec2& robot_vel, const Pfz& pfz, const Vec2& closest_pred,
                    const FrozoneConfig& cfg) {
  const Vec2 lookahead = robot_vel * cfg.pred_dt;
  return dist(lookahead, closest_pred) <= cfg.eta && contains(pfz, lookahead);
}

DeviationResult deviation_angle(const Vec2& robot_vel, const Vec2& goal, const Pfz& pfz,
                                const Vec2& closest_ped_current, const FrozoneConfig& cfg,
                                double sensing_offset) {
  const double bound = max_deviation(cfg.eta, sensing_offset);
  const Vec2 lookahead = robot_vel * cfg.pred_dt;
  const int steps = static_cast<int>(std::floor(bound / cfg.sweep_step + 1e-9));

  DeviationResult out;
  out.triggered = true;

  // φ₁: feasible grid angle nearest the goal. Goal distances within
  // goal_tie_tolerance of the best count as equal; among those the robot
  // turns least (smallest bearing of the rotated lookahead), then rotates
  // least, then goes left.
  struct Candidate {
    double phi;
    double goal_dist;
    double clearance;
    double turn;
  };
  std::vector<Candidate> sweep;
  sweep.reserve(2 * steps + 1);
  for (int k = -steps; k <= steps; ++k) {
    const double phi = k * cfg.sweep_step;
    const Vec2 rotated = rotate(lookahead, phi);
    sweep.push_back({phi, dist(rotated, goal), dist_to_zone(pfz, rotated),
                     std::abs(std::atan2(rotated.y, rotated.x))});
  }

  double best_goal = std::numeric_limits<double>::infinity();
  for (const Candidate& c : sweep) {
    if (c.clearance > 0.0) best_goal = std::min(best_goal, c.goal_dist);
  }
  const Candidate* phi1 = nullptr;
  const Candidate* widest = nullptr;
  for (const Candidate& c : sweep) {
    if (c.clearance > 0.0 && c.goal_dist <= best_goal + cfg.goal_tie_tolerance) {
      const auto key = [](const Candidate& x) { return std::tuple(x.turn, std::abs(x.phi), -x.phi); };
      if (phi1 == nullptr || key(c) < key(*phi1)) phi1 = &c;
    }
    if (widest == nullptr || c.clearance > widest->clearance + kCmpTol) widest = &c;
  }
  out.sweep_feasible = phi1 != nullptr;
  if (phi1 != nullptr) {
    out.phi1 = phi1->phi;
  }

  // φ₂: toward the closest pedestrian's current position. When its lookahead
  // stays in the PFZ it snaps to the nearest feasible angle on the same side.
  const double bearing = std::atan2(closest_ped_current.y, closest_ped_current.x);
  if (bearing != 0.0) {
    out.phi2 = bearing;
  }
  std::optional<double> phi2_used;
  if (out.phi2 && std::abs(*out.phi2) <= bound) {
    if (!contains(pfz, rotate(lookahead, *out.phi2))) {
      phi2_used = *out.phi2;
    } else {
      const Candidate* snap = nullptr;
      for (const Candidate& c : sweep) {
        if (c.clearance > 0.0 && c.phi * *out.phi2 > 0.0 &&
            (snap == nullptr || std::abs(c.phi - *out.phi2) < std::abs(snap->phi - *out.phi2))) {
          snap = &c;
        }
      }
      if (snap != nullptr) phi2_used = snap->phi;
    }
  }

  if (out.phi1 && phi2_used && std::abs(*out.phi2) < std::abs(*out.phi1)) {
    out.phi = *phi2_used;
    out.chosen_branch = DeviationBranch::Phi2;
  } else if (out.phi1) {
    out.phi = *out.phi1;
    out.chosen_branch = DeviationBranch::Phi1;
  } else {
    out.phi = widest->phi;
    out.chosen_branch = DeviationBranch::Phi1;
  }
  out.new_velocity = rotate(robot_vel, out.phi);
  out.lookahead = out.new_velocity * cfg.pred_dt;
  return out;
}

FrozoneStep frozone_step(const SensorFrame& frame, double robot_speed, const Vec2& goal,
                         const Vec2& guiding_vel, const FrozoneConfig& cfg,
                         double sensing_offset) {
  FrozoneStep out;
  out.velocity = guiding_vel;
  out.deviation.new_velocity = guiding_vel;
  out.deviation.lookahead = guiding_vel * cfg.pred_dt;

  const Classification labels = classify(frame, robot_speed, cfg);
  const std::vector<Vec2> predicted = predict(frame, labels, cfg.pred_dt);
  out.freezing_count = static_cast<int>(predicted.size());
  out.pfz = build_pfz(predicted, cfg);
  if (!out.pfz) {
    return out;
  }

  // Closest potentially-freezing pedestrian by current position.
  std::size_t closest = 0;
  double closest_dist = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  Vec2 closest_current;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].cls != PedClass::PotentiallyFreezing) {
      continue;
    }
    const double d = frame.observations[i].position.norm();
    if (d < closest_dist) {
      closest_dist = d;
      closest = k;
      closest_current = frame.observations[i].position;
    }
    ++k;
  }

  if (!should_deviate(guiding_vel, *out.pfz, predicted[closest], cfg)) {
    return out;
  }
  out.deviation =
      deviation_angle(guiding_vel, goal, *out.pfz, closest_current, cfg, sensing_offset);
  out.velocity = out.deviation.new_velocity;
  return out;
}

}  // namespace frozone
