#include "frozone/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frozone {

Vec2 to_robot_frame(const Pose2& pose, const Vec2& world) {
  return rotate(world - pose.position, -pose.heading);
}

Vec2 to_world_frame(const Pose2& pose, const Vec2& local) {
  return pose.position + rotate(local, pose.heading);
}

void SensorConfig::validate() const {
  if (!(side > 0.0)) throw std::invalid_argument("sensing.side must be > 0");
  if (!(offset > 0.0 && offset < side)) {
    throw std::invalid_argument("sensing.offset must be in (0, side)");
  }
  if (!(fov > 0.0 && fov < std::numbers::pi)) {
    throw std::invalid_argument("sensing.fov must be in (0, pi)");
  }
  if (image_w <= 0 || image_h <= 0) {
    throw std::invalid_argument("sensing image size must be positive");
  }
  if (!(pos_noise_sigma >= 0.0)) throw std::invalid_argument("sensing.pos_noise_sigma must be >= 0");
  if (!(frame_dt > 0.0)) throw std::invalid_argument("sensing.frame_dt must be > 0");
  if (motion_window < 1) throw std::invalid_argument("sensing.motion_window must be >= 1");
  if (motion_min_frames < 1 || motion_min_frames > motion_window) {
    throw std::invalid_argument("sensing.motion_min_frames must be in [1, motion_window]");
  }
}

bool SensorConfig::in_square(const Vec2& p) const {
  return p.x >= offset && p.x <= offset + side && std::abs(p.y) <= side / 2.0;
}

bool SensorConfig::in_fov(const Vec2& p) const {
  return p.x > 0.0 && std::abs(std::atan2(p.y, p.x)) <= fov / 2.0;
}

void RangeSensorConfig::validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("lidar.range must be > 0");
  if (!(fov > 0.0 && fov <= 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("lidar.fov must be in (0, 2pi]");
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("lidar.noise_sigma must be >= 0");
}

Vec2 Observation::velocity() const {
  if (!forward || !speed) {
    return {};
  }
  return *forward * *speed;
}

const Observation* SensorFrame::find(int id) const {
  const auto it = std::find_if(observations.begin(), observations.end(),
                               [id](const Observation& o) { return o.id == id; });
  return it == observations.end() ? nullptr : &*it;
}

SensorFrame sense(std::span<const PedestrianState> peds, double timestamp, const Pose2& robot,
                  const SensorConfig& cfg, std::mt19937_64& rng) {
  SensorFrame frame{timestamp, robot, {}};
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < peds.size(); ++i) {
    if (peds[i].is_static) {
      continue;
    }
    const Vec2 local = to_robot_frame(robot, peds[i].position);
    if (!cfg.in_square(local) || !cfg.in_fov(local)) {
      continue;
    }
    Vec2 observed = local;
    if (cfg.pos_noise_sigma > 0.0) {
      observed.x += cfg.pos_noise_sigma * noise(rng);
      observed.y += cfg.pos_noise_sigma * noise(rng);
      observed.x = std::clamp(observed.x, cfg.offset, cfg.offset + cfg.side);
      observed.y = std::clamp(observed.y, -cfg.side / 2.0, cfg.side / 2.0);
    }
    Observation obs;
    obs.id = static_cast<int>(i);
    obs.position = observed;
    obs.radius = peds[i].radius;
    frame.observations.push_back(obs);
  }
  return frame;
}

SensorFrame scan(std::span<const PedestrianState> peds, double timestamp, const Pose2& robot,
                 const RangeSensorConfig& cfg, std::mt19937_64& rng) {
  SensorFrame frame{timestamp, robot, {}};
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < peds.size(); ++i) {
    const Vec2 local = to_robot_frame(robot, peds[i].position);
    if (local.norm() - peds[i].radius > cfg.range ||
        std::abs(std::atan2(local.y, local.x)) > cfg.fov / 2.0) {
      continue;
    }
    Observation obs;
    obs.id = static_cast<int>(i);
    obs.position = local;
    if (cfg.noise_sigma > 0.0) {
      obs.position.x += cfg.noise_sigma * noise(rng);
      obs.position.y += cfg.noise_sigma * noise(rng);
    }
    obs.radius = peds[i].radius;
    frame.observations.push_back(obs);
  }
  return frame;
}

SensorFrame estimate_motion(const SensorFrame& prev, const SensorFrame& curr) {
  const double dt = curr.timestamp - prev.timestamp;
  if (!(dt > 0.0)) {
    throw std::invalid_argument("frame interval must be > 0");
  }
  SensorFrame out = curr;
  for (Observation& obs : out.observations) {
    const Observation* before = prev.find(obs.id);
    if (before == nullptr) {
      continue;
    }
    const Vec2 world_prev = to_world_frame(prev.robot_pose, before->position);
    const Vec2 world_curr = to_world_frame(curr.robot_pose, obs.position);
    const Vec2 velocity = rotate((world_curr - world_prev) / dt, -curr.robot_pose.heading);
    const double speed = velocity.norm();
    obs.speed = speed;
    // Zero speed has no direction; any unit vector yields a zero velocity.
    obs.forward = speed > kGeomTol ? velocity / speed : Vec2{-1.0, 0.0};
  }
  return out;
}

SensorFrame MotionTracker::update(const SensorFrame& curr) {
  SensorFrame out = curr;
  const std::size_t usable =
      history_.size() >= static_cast<std::size_t>(min_frames_) ? history_.size() - min_frames_ + 1 : 0;
  for (std::size_t h = 0; h < usable; ++h) {
    const SensorFrame& past = history_[h];
    bool pending = false;
    for (const Observation& o : out.observations) {
      pending = pending || !o.speed;
    }
    if (!pending) {
      break;
    }
    SensorFrame candidate = estimate_motion(past, curr);
    for (std::size_t i = 0; i < out.observations.size(); ++i) {
      if (!out.observations[i].speed && candidate.observations[i].speed) {
        out.observations[i] = candidate.observations[i];
      }
    }
  }
  history_.push_back(curr);
  while (static_cast<int>(history_.size()) > window_) {
    history_.pop_front();
  }
  return out;
}

double bbox_bearing(const SyntheticBBox& box, const SensorConfig& cfg) {
  return (0.5 - box.centroid_x / static_cast<double>(cfg.image_w)) * cfg.fov;
}

Vec2 bbox_to_position(const SyntheticBBox& box, const SensorConfig& cfg) {
  const double psi = bbox_bearing(box, cfg);
  return Vec2{std::cos(psi), std::sin(psi)} * box.mean_depth;
}

SyntheticBBox synthesize_bbox(int id, const Vec2& p, const SensorConfig& cfg) {
  const double psi = std::atan2(p.y, p.x);
  return {id, (0.5 - psi / cfg.fov) * static_cast<double>(cfg.image_w), p.norm()};
}

}  // namespace frozone
