#ifndef OBSFRAME_CAMERA_HPP
#define OBSFRAME_CAMERA_HPP

// Ideal pinhole camera. Camera frame: +Z forward, +X right, +Y down.

#include <cmath>
#include <string>
#include <vector>

#include "obsframe/error.hpp"
#include "obsframe/se3.hpp"

namespace obsframe {

struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
};

struct CameraRig {
  std::string camera_id;
  Intrinsics intrinsics;
  /// World-to-camera.
  Transform extrinsics;
  /// Reserved for lens distortion coefficients; always empty (pinhole only).
  std::vector<double> distortion;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

inline Pixel project(const Intrinsics& k, const Vec3& p_cam) {
  if (!p_cam.allFinite()) throw Error("non_finite", "project: non-finite point");
  if (p_cam.z() <= 1e-9) {
    throw Error("behind_camera", "project: point has Z = " + std::to_string(p_cam.z()) +
                                     " (must be > 1e-9)");
  }
  return {k.fx * p_cam.x() / p_cam.z() + k.cx, k.fy * p_cam.y() / p_cam.z() + k.cy};
}

inline Vec3 unproject(const Intrinsics& k, const Pixel& px, double depth) {
  if (!std::isfinite(px.u) || !std::isfinite(px.v) || !std::isfinite(depth)) {
    throw Error("non_finite", "unproject: non-finite input");
  }
  if (depth <= 0.0) {
    throw Error("nonpositive_depth", "unproject: depth must be > 0");
  }
  return {(px.u - k.cx) * depth / k.fx, (px.v - k.cy) * depth / k.fy, depth};
}

inline bool in_frame(const Intrinsics& k, const Pixel& px) {
  return px.u >= 0.0 && px.u < k.width && px.v >= 0.0 && px.v < k.height;
}

/// Names of violated rig invariants; empty means valid.
inline std::vector<std::string> validate_rig(const CameraRig& r) {
  std::vector<std::string> out;
  const Intrinsics& k = r.intrinsics;
  if (r.camera_id.empty()) out.emplace_back("empty_camera_id");
  if (!std::isfinite(k.fx) || !std::isfinite(k.fy) || !std::isfinite(k.cx) ||
      !std::isfinite(k.cy)) {
    out.emplace_back("non_finite_intrinsics");
  } else {
    if (k.fx <= 0.0) out.emplace_back("fx_nonpositive");
    if (k.fy <= 0.0) out.emplace_back("fy_nonpositive");
    if (k.width <= 0) out.emplace_back("width_nonpositive");
    if (k.height <= 0) out.emplace_back("height_nonpositive");
    if (k.cx < 0.0 || k.cx >= k.width) out.emplace_back("cx_outside_frame");
    if (k.cy < 0.0 || k.cy >= k.height) out.emplace_back("cy_outside_frame");
  }
  const Mat3& rot = r.extrinsics.rotation;
  if (!r.extrinsics.finite()) {
    out.emplace_back("non_finite_extrinsics");
  } else {
    if (orthonormality_error(rot) >= 1e-9) out.emplace_back("rotation_not_orthonormal");
    if (rot.determinant() < 0.0) out.emplace_back("improper_rotation");
  }
  if (!r.distortion.empty()) out.emplace_back("distortion_unsupported");
  return out;
}

}  // namespace obsframe

#endif  // OBSFRAME_CAMERA_HPP
