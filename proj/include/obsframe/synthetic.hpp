#ifndef OBSFRAME_SYNTHETIC_HPP
#define OBSFRAME_SYNTHETIC_HPP

// Synthetic multi-view data: a pool of look-at cameras on a spherical shell,
// scripted pick trajectories, and camera-space observation vectors.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "obsframe/camera.hpp"
#include "obsframe/episode.hpp"
#include "obsframe/error.hpp"
#include "obsframe/se3.hpp"

namespace obsframe {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct CameraPoolSpec {
  int pool_size = 512;
  Range radius{1.1, 1.6};
  Range elevation{0.35, 1.1};
  Range azimuth{-kPi, kPi};
  Vec3 look_at{0.55, 0.0, 0.21};
  Intrinsics intrinsics{180.0, 180.0, 128.0, 128.0, 256, 256};
  std::uint64_t seed = 0;
};

/// Deterministic uniform draw in [lo, hi]; portable across standard libraries.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

/// Box-Muller normal draw built on `uniform`.
inline double normal(std::mt19937_64& rng) {
  double u1 = uniform(rng, 0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

/// World-to-camera transform of a camera at `eye` looking at `target` with
/// +Z forward, +X right, +Y down and world +Z as the up reference.
inline Transform look_at(const Vec3& eye, const Vec3& target) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 up = Vec3::UnitZ();
  Vec3 right = forward.cross(up);
  if (right.norm() < 1e-9) throw Error("degenerate_look_at", "view direction parallel to up");
  right.normalize();
  const Vec3 down = forward.cross(right);
  Mat3 cam_to_world;
  cam_to_world.col(0) = right;
  cam_to_world.col(1) = down;
  cam_to_world.col(2) = forward;
  const Mat3 r = cam_to_world.transpose();
  return {r, -(r * eye)};
}

inline Vec3 shell_point(const Vec3& center, double radius, double elevation, double azimuth) {
  return center + radius * Vec3(std::cos(elevation) * std::cos(azimuth),
                                std::cos(elevation) * std::sin(azimuth), std::sin(elevation));
}

inline void require_range(const Range& r, const char* name) {
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw Error("empty_range", std::string(name) + " range is empty");
  }
}

inline std::string camera_name(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "cam%05zu", i);
  return buf;
}

inline std::vector<CameraRig> sample_camera_pool(const CameraPoolSpec& spec) {
  if (spec.pool_size < 1) throw Error("bad_pool", "pool_size must be >= 1");
  require_range(spec.radius, "radius");
  require_range(spec.elevation, "elevation");
  require_range(spec.azimuth, "azimuth");
  if (spec.radius.lo <= 0.0) throw Error("bad_pool", "radius must be > 0");
  if (spec.elevation.lo <= 0.0 || spec.elevation.hi >= kPi / 2) {
    throw Error("bad_pool", "elevation must lie in (0, pi/2)");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<CameraRig> pool;
  pool.reserve(static_cast<std::size_t>(spec.pool_size));
  for (int i = 0; i < spec.pool_size; ++i) {
    const double r = uniform(rng, spec.radius.lo, spec.radius.hi);
    const double el = uniform(rng, spec.elevation.lo, spec.elevation.hi);
    const double az = uniform(rng, spec.azimuth.lo, spec.azimuth.hi);
    pool.push_back({camera_name(static_cast<std::size_t>(i)), spec.intrinsics,
                    look_at(shell_point(spec.look_at, r, el, az), spec.look_at), {}});
  }
  return pool;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

enum class MotionFamily { reach, reach_grasp_lift };

inline const char* to_string(MotionFamily f) {
  return f == MotionFamily::reach ? "reach" : "reach-grasp-lift";
}

struct SyntheticTaskSpec {
  Vec3 workspace_min{0.35, -0.25, 0.02};
  Vec3 workspace_max{0.75, 0.25, 0.40};
  int steps = 24;
  MotionFamily family = MotionFamily::reach;
  /// Standard deviation (meters) of the jitter on the approach waypoint.
  double noise_scale = 0.02;
  /// Initial gripper yaw differs from the object yaw by at most this much.
  double yaw_offset = 0.3;
  /// Fraction of the remaining error closed per step.
  double servo_gain = 0.3;
};

/// A generated episode (no cameras attached yet) plus the target object
/// pose; the object is part of what a camera observes.
struct SyntheticEpisode {
  TrajectoryEpisode episode;
  Pose object;
};

inline constexpr double kGripperOpen = 1.0;
inline constexpr double kGripperClosed = 0.0;

inline bool inside(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
}

/// Scripted pick demonstration. The end-effector servos toward
/// object-relative waypoints (approach above the object, grasp, and for
/// reach-grasp-lift: close, then lift), closing a fixed fraction of the
/// remaining translation and rotation each step. Every step therefore
/// depends only on the current end-effector, object and gripper state.
inline SyntheticEpisode gen_trajectory(const SyntheticTaskSpec& task, std::uint64_t seed) {
  if (task.steps < 3) throw Error("bad_task", "trajectory length must be >= 3");
  const Vec3 lo = task.workspace_min;
  const Vec3 hi = task.workspace_max;
  if (!((hi - lo).array() > 0.0).all()) throw Error("bad_task", "workspace box is empty");
  if (!(task.servo_gain > 0.0 && task.servo_gain <= 1.0)) {
    throw Error("bad_task", "servo_gain must lie in (0, 1]");
  }
  const double lift = 0.15;
  const double clearance = 0.03;
  if (hi.z() - lo.z() < clearance + lift || (hi - lo).head<2>().minCoeff() <= 0.1) {
    throw Error("bad_task", "workspace too small for the pick motion");
  }
  std::mt19937_64 rng(seed);
  auto draw = [&](double a, double b) { return uniform(rng, a, b); };

  const Vec3 object_pos(draw(lo.x() + 0.05, hi.x() - 0.05), draw(lo.y() + 0.05, hi.y() - 0.05),
                        lo.z() + clearance);
  const double object_yaw = draw(-kPi / 2, kPi / 2);
  const Vec3 start(draw(lo.x(), hi.x()), draw(lo.y(), hi.y()),
                   draw(0.5 * (lo.z() + hi.z()), hi.z()));
  const double start_yaw = object_yaw + draw(-task.yaw_offset, task.yaw_offset);

  // Gripper points down (tool +Z toward the table).
  const Mat3 down = rot_x(kPi);
  const Eigen::Quaterniond q_grasp(rot_z(object_yaw) * down);

  Vec3 approach = object_pos + Vec3(0.0, 0.0, 0.12);
  for (int k = 0; k < 3; ++k) approach[k] += task.noise_scale * normal(rng);
  approach = approach.cwiseMax(lo).cwiseMin(hi);
  const Vec3 lifted = object_pos + Vec3(0.0, 0.0, lift);

  enum class Phase { approach, descend, close, lift };
  Phase phase = Phase::approach;

  SyntheticEpisode out;
  out.object = {rot_z(object_yaw), object_pos};
  TrajectoryEpisode& e = out.episode;
  e.task = to_string(task.family);
  e.instruction = task.family == MotionFamily::reach ? "reach the object"
                                                      : "pick up the object and lift it";
  Vec3 p = start;
  Eigen::Quaterniond q(rot_z(start_yaw) * down);
  double gripper = kGripperOpen;
  const double gain = task.servo_gain;
  for (int k = 0; k < task.steps; ++k) {
    e.steps.push_back({k, {q.normalized().toRotationMatrix(), p}, gripper});
    switch (phase) {
      case Phase::approach:
        if ((p - approach).norm() < 0.02) phase = Phase::descend;
        break;
      case Phase::descend:
        if (task.family == MotionFamily::reach_grasp_lift && (p - object_pos).norm() < 0.01) {
          phase = Phase::close;
        }
        break;
      case Phase::close:
        if (gripper <= kGripperClosed) phase = Phase::lift;
        break;
      case Phase::lift:
        break;
    }
    switch (phase) {
      case Phase::approach: p += gain * (approach - p); break;
      case Phase::descend: p += gain * (object_pos - p); break;
      case Phase::close: gripper = std::max(kGripperClosed, gripper - 0.25); break;
      case Phase::lift: p += gain * (lifted - p); break;
    }
    if (phase != Phase::close) q = q.slerp(gain, q_grasp);
  }
  return out;
}

/// Workspace corners must project in-frame in front of every rig.
inline void check_workspace_visibility(const SyntheticTaskSpec& task,
                                       const std::vector<CameraRig>& rigs) {
  for (const CameraRig& rig : rigs) {
    for (int c = 0; c < 8; ++c) {
      const Vec3 corner((c & 1) ? task.workspace_max.x() : task.workspace_min.x(),
                        (c & 2) ? task.workspace_max.y() : task.workspace_min.y(),
                        (c & 4) ? task.workspace_max.z() : task.workspace_min.z());
      const Vec3 pc = rig.extrinsics.rotation * corner + rig.extrinsics.translation;
      if (pc.z() <= 1e-3 || !in_frame(rig.intrinsics, project(rig.intrinsics, pc))) {
        throw Error("workspace_outside_frustum",
                    "workspace corner not visible from camera '" + rig.camera_id + "'");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

/// Camera-space observation of one step: end-effector pose (translation +
/// canonical quaternion) and normalized pixel, the same for the object, and
/// the gripper state.
struct ObservationVector {
  static constexpr std::size_t kDims = 19;
  std::array<double, kDims> values{};
  /// Index of the observing view among the training views, when a one-hot
  /// view id is requested; -1 otherwise.
  int view_index = -1;
};

namespace detail {

inline std::size_t put_pose(std::array<double, ObservationVector::kDims>& v, std::size_t at,
                            const Pose& p_cam, const Intrinsics& k) {
  const Pixel px = project(k, p_cam.translation);
  const auto q = quat_from_rot(p_cam.rotation).wxyz();
  for (int i = 0; i < 3; ++i) v[at++] = p_cam.translation[i];
  for (int i = 0; i < 4; ++i) v[at++] = q[i];
  v[at++] = px.u / k.width;
  v[at++] = px.v / k.height;
  return at;
}

}  // namespace detail

/// Throws behind_camera when either the end-effector or the object is not in
/// front of the rig.
inline ObservationVector build_observation(const Pose& ee_world, const Pose& object_world,
                                           double gripper, const CameraRig& rig) {
  ObservationVector o;
  std::size_t at = 0;
  at = detail::put_pose(o.values, at, transform_pose(rig.extrinsics, ee_world), rig.intrinsics);
  at = detail::put_pose(o.values, at, transform_pose(rig.extrinsics, object_world),
                        rig.intrinsics);
  o.values[at] = gripper;
  return o;
}

/// Applies a rigid world motion to a whole synthetic episode (poses and
/// object), leaving gripper and metadata untouched.
inline SyntheticEpisode move_world(const SyntheticEpisode& src, const Pose& motion) {
  SyntheticEpisode out = src;
  for (Step& s : out.episode.steps) s.pose_base = compose(motion, s.pose_base);
  out.object = compose(motion, src.object);
  return out;
}

}  // namespace obsframe

#endif  // OBSFRAME_SYNTHETIC_HPP
