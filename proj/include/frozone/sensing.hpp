#pragma once

// Limited-range sensing: the offset square in front of the robot seen by the
// depth camera, the wider range scan used by the guiding planner, ego-motion
// compensated frame differencing, and depth-box to position recovery.

#include <deque>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "frozone/geometry.hpp"
#include "frozone/pedestrian_model.hpp"

namespace frozone {

struct Pose2 {
  Vec2 position;
  double heading{0.0};
};

/// World point expressed in the frame of `pose` (+x forward, +y left).
Vec2 to_robot_frame(const Pose2& pose, const Vec2& world);
Vec2 to_world_frame(const Pose2& pose, const Vec2& local);

struct SensorConfig {
  double side{3.0};                       ///< s_sen, meters
  double offset{0.5};                     ///< f, meters
  double fov{std::numbers::pi / 3.0};     ///< camera field of view, radians
  int image_w{150};
  int image_h{120};
  double pos_noise_sigma{0.05};           ///< meters, per position component
  double frame_dt{0.1};                   ///< seconds between frames
  /// Frames spanned by the motion difference. 1 differences consecutive frames.
  int motion_window{5};
  /// Fewer frames than this between sightings leaves the motion unknown.
  int motion_min_frames{5};

  void validate() const;
  bool in_square(const Vec2& p) const;
  bool in_fov(const Vec2& p) const;
};

/// Planar range scanner for the guiding planner. Sees every disc, including
/// static obstacles.
struct RangeSensorConfig {
  double range{4.0};
  double fov{240.0 * std::numbers::pi / 180.0};
  double noise_sigma{0.02};

  void validate() const;
};

struct Observation {
  int id{0};
  Vec2 position;                  ///< robot frame
  std::optional<Vec2> forward;    ///< unit; empty until motion is known
  std::optional<double> speed;
  double radius{0.25};            ///< used by the range scan only

  /// forward·speed, or zero while the motion is unknown.
  Vec2 velocity() const;
};

struct SensorFrame {
  double timestamp{0.0};
  Pose2 robot_pose;  ///< odometry at capture time, world frame
  std::vector<Observation> observations;

  const Observation* find(int id) const;
};

/// Camera frame: pedestrians (never static obstacles) inside both the sensing
/// square and the angular field of view, with Gaussian position noise then
/// re-clipped into the square. Ids are indices into `peds`.
SensorFrame sense(std::span<const PedestrianState> peds, double timestamp, const Pose2& robot,
                  const SensorConfig& cfg, std::mt19937_64& rng);

/// Range scan of every disc within range and field of view.
SensorFrame scan(std::span<const PedestrianState> peds, double timestamp, const Pose2& robot,
                 const RangeSensorConfig& cfg, std::mt19937_64& rng);

/// Fills forward/speed in `curr` for ids also present in `prev`. The robot's
/// own motion between the frames is removed so the result is the
/// pedestrian's world velocity expressed in the current robot frame.
/// Throws std::invalid_argument when curr is not later than prev.
SensorFrame estimate_motion(const SensorFrame& prev, const SensorFrame& curr);

/// Rolling history of camera frames. Each id is differenced against the
/// oldest retained frame that contains it, provided that frame is at least
/// `min_frames` frames old.
class MotionTracker {
 public:
  explicit MotionTracker(int window, int min_frames = 1)
      : window_(window < 1 ? 1 : window), min_frames_(min_frames < 1 ? 1 : min_frames) {}

  SensorFrame update(const SensorFrame& curr);

 private:
  int window_;
  int min_frames_;
  std::deque<SensorFrame> history_;
};

struct SyntheticBBox {
  int id{0};
  double centroid_x{0.0};  ///< pixels, 0 = left image edge
  double mean_depth{0.0};  ///< meters
};

/// Recentered angular displacement: the image center maps to 0, the left edge
/// to +fov/2 (robot's left).
double bbox_bearing(const SyntheticBBox& box, const SensorConfig& cfg);

Vec2 bbox_to_position(const SyntheticBBox& box, const SensorConfig& cfg);

/// Inverse of bbox_to_position: the box a pedestrian at `p` would produce.
SyntheticBBox synthesize_bbox(int id, const Vec2& p, const SensorConfig& cfg);

}  // namespace frozone
