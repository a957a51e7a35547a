#ifndef OBSFRAME_SE3_HPP
#define OBSFRAME_SE3_HPP

// Rigid-body algebra: poses, world-to-camera extrinsics, relative actions,
// and the rotation conversions (RPY, quaternion) used by the codec and the
// file formats.
//
// Conventions:
//   * Homogeneous 4x4 matrices act on column vectors; compose(a, b) = a * b.
//   * RPY is extrinsic X-Y-Z: R = Rz(yaw) * Ry(pitch) * Rx(roll).
//   * Quaternions are Hamilton, scalar-first (w, x, y, z), canonical w >= 0.
//   * Actions are left-multiplicative deltas: p2 = A * p1.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "obsframe/error.hpp"

namespace obsframe {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;

/// Tolerance above which compose() re-orthonormalizes its rotation block.
inline constexpr double kDriftTolerance = 1e-9;

struct EulerRPY {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

namespace detail {

inline bool all_finite(const Mat3& m) { return m.allFinite(); }
inline bool all_finite(const Vec3& v) { return v.allFinite(); }

inline void require_finite(bool ok, const char* what) {
  if (!ok) throw Error("non_finite", std::string(what) + ": non-finite input");
}

}  // namespace detail

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

/// max |R^T R - I|
inline double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  return r.allFinite() && orthonormality_error(r) < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

/// Nearest rotation in the Frobenius sense (polar factor U V^T).
inline Mat3 orthonormalize(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

inline Mat3 rot_x(double a) {
  return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix();
}
inline Mat3 rot_y(double a) {
  return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix();
}
inline Mat3 rot_z(double a) {
  return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix();
}

/// Geodesic angle of a rotation, in [0, pi].
inline double rotation_angle(const Mat3& r) {
  // atan2 form stays accurate near 0 and pi, unlike acos of the trace.
  const Vec3 axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (r.trace() - 1.0));
}

// ---------------------------------------------------------------------------
// Rigid transforms with a semantic role
// ---------------------------------------------------------------------------

struct PoseRole {};
struct ExtrinsicRole {};
struct ActionRole {};

/// Rotation + translation. The Role tag keeps poses, world-to-camera
/// extrinsics and relative actions from being mixed up at call sites;
/// `as<Other>()` is the explicit escape hatch.
template <class Role>
struct Rigid {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Rigid identity() { return {}; }

  static Rigid from_matrix(const Mat4& m) {
    return {m.template topLeftCorner<3, 3>(), m.template topRightCorner<3, 1>()};
  }

  [[nodiscard]] Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  template <class Other>
  [[nodiscard]] Rigid<Other> as() const {
    return {rotation, translation};
  }

  [[nodiscard]] bool finite() const {
    return rotation.allFinite() && translation.allFinite();
  }
};

using Pose = Rigid<PoseRole>;
using Transform = Rigid<ExtrinsicRole>;
using ActionMatrix = Rigid<ActionRole>;

/// Largest absolute entry difference of the 4x4 matrices.
template <class A, class B>
double max_abs_diff(const Rigid<A>& a, const Rigid<B>& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

namespace detail {

template <class Out, class A, class B>
Rigid<Out> multiply(const Rigid<A>& a, const Rigid<B>& b, const char* what) {
  require_finite(a.finite() && b.finite(), what);
  Rigid<Out> out{a.rotation * b.rotation, a.rotation * b.translation + a.translation};
  if (orthonormality_error(out.rotation) > kDriftTolerance) {
    out.rotation = orthonormalize(out.rotation);
  }
  return out;
}

template <class Role>
Rigid<Role> invert(const Rigid<Role>& p, const char* what) {
  require_finite(p.finite(), what);
  const Mat3 rt = p.rotation.transpose();
  return {rt, -(rt * p.translation)};
}

}  // namespace detail

/// a * b as homogeneous matrices.
template <class Role>
Rigid<Role> compose(const Rigid<Role>& a, const Rigid<Role>& b) {
  return detail::multiply<Role>(a, b, "compose");
}

template <class Role>
Rigid<Role> inverse(const Rigid<Role>& p) {
  return detail::invert(p, "inverse");
}

/// World-frame delta between two consecutive poses: A = p2 * p1^-1.
inline ActionMatrix action_from_pose_pair(const Pose& p1, const Pose& p2) {
  return detail::multiply<ActionRole>(p2, detail::invert(p1, "action_from_pose_pair"),
                                      "action_from_pose_pair");
}

/// Applies a left-multiplicative action: returns a * p.
inline Pose apply_action(const ActionMatrix& a, const Pose& p) {
  return detail::multiply<PoseRole>(a, p, "apply_action");
}

/// Re-expresses a world pose in the camera frame: T * p.
inline Pose transform_pose(const Transform& t, const Pose& p) {
  return detail::multiply<PoseRole>(t, p, "transform_pose");
}

/// World action to camera action: T * A * T^-1.
inline ActionMatrix conjugate_action(const Transform& t, const ActionMatrix& a) {
  const Transform t_inv = detail::invert(t, "conjugate_action");
  return detail::multiply<ActionRole>(
      detail::multiply<ActionRole>(t, a, "conjugate_action"), t_inv, "conjugate_action");
}

/// Camera action back to world action: T^-1 * A_cam * T.
inline ActionMatrix inverse_conjugate_action(const Transform& t, const ActionMatrix& a_cam) {
  const Transform t_inv = detail::invert(t, "inverse_conjugate_action");
  return detail::multiply<ActionRole>(
      detail::multiply<ActionRole>(t_inv, a_cam, "inverse_conjugate_action"), t,
      "inverse_conjugate_action");
}

// ---------------------------------------------------------------------------
// Roll / pitch / yaw
// ---------------------------------------------------------------------------

inline Mat3 rot_from_rpy(const EulerRPY& e) {
  detail::require_finite(std::isfinite(e.roll) && std::isfinite(e.pitch) && std::isfinite(e.yaw),
                         "rot_from_rpy");
  return rot_z(e.yaw) * rot_y(e.pitch) * rot_x(e.roll);
}

/// Inverse of rot_from_rpy on pitch in [-pi/2, pi/2], roll/yaw in (-pi, pi].
/// At gimbal lock roll is pinned to 0 and yaw carries the free angle.
inline EulerRPY rpy_from_rot(const Mat3& r) {
  const double cos_pitch = std::hypot(r(0, 0), r(1, 0));
  EulerRPY e;
  e.pitch = std::atan2(-r(2, 0), cos_pitch);
  e.roll = cos_pitch > 1e-12 ? std::atan2(r(2, 1), r(2, 2)) : 0.0;
  // Yaw is read from R * Rx(roll)^T = Rz(yaw) Ry(pitch), whose (0,1)/(1,1)
  // entries are -sin(yaw)/cos(yaw) for any pitch. This keeps the matrix
  // round-trip exact near gimbal lock, where roll itself is ill-conditioned.
  const Mat3 m = r * rot_x(e.roll).transpose();
  e.yaw = std::atan2(-m(0, 1), m(1, 1));
  e.roll = wrap_angle(e.roll);
  e.yaw = wrap_angle(e.yaw);
  return e;
}

// ---------------------------------------------------------------------------
// Quaternions
// ---------------------------------------------------------------------------

/// Unit quaternion, Hamilton convention, scalar-first, canonical sign.
class UnitQuaternion {
 public:
  /// Rejects norms off by more than 1e-6, renormalizes smaller deviations,
  /// and flips to the canonical hemisphere.
  static UnitQuaternion from_wxyz(double w, double x, double y, double z) {
    detail::require_finite(std::isfinite(w) && std::isfinite(x) && std::isfinite(y) &&
                               std::isfinite(z),
                           "quaternion");
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (std::abs(n - 1.0) > 1e-6) {
      throw Error("non_unit_quaternion",
                  "quaternion norm " + std::to_string(n) + " deviates from 1 by more than 1e-6");
    }
    if (std::abs(n - 1.0) > 1e-12) {
      w /= n;
      x /= n;
      y /= n;
      z /= n;
    }
    UnitQuaternion q;
    q.v_ = {w, x, y, z};
    q.canonicalize();
    return q;
  }

  static UnitQuaternion from_wxyz(const std::array<double, 4>& a) {
    return from_wxyz(a[0], a[1], a[2], a[3]);
  }

  static UnitQuaternion identity() { return {}; }

  [[nodiscard]] double w() const { return v_[0]; }
  [[nodiscard]] double x() const { return v_[1]; }
  [[nodiscard]] double y() const { return v_[2]; }
  [[nodiscard]] double z() const { return v_[3]; }
  [[nodiscard]] const std::array<double, 4>& wxyz() const { return v_; }

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  friend UnitQuaternion quat_from_rot(const Mat3& r);

  void canonicalize() {
    bool flip = v_[0] < 0.0;
    if (v_[0] == 0.0) {
      for (int i = 1; i < 4; ++i) {
        if (v_[i] != 0.0) {
          flip = v_[i] < 0.0;
          break;
        }
      }
    }
    if (flip) {
      for (double& c : v_) c = -c;
    }
    for (double& c : v_) {
      if (c == 0.0) c = 0.0;  // drop negative zeros
    }
  }

  std::array<double, 4> v_{1.0, 0.0, 0.0, 0.0};
};

inline Mat3 rot_from_quat(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 r;
  // clang-format off
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
       2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y);
  // clang-format on
  return r;
}

/// Shepperd's method: branch on the largest of (trace, diagonal) so the
/// divisor never approaches zero.
inline UnitQuaternion quat_from_rot(const Mat3& r) {
  detail::require_finite(r.allFinite(), "quat_from_rot");
  double w, x, y, z;
  const double tr = r.trace();
  if (tr >= r(0, 0) && tr >= r(1, 1) && tr >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  UnitQuaternion q;
  q.v_ = {w / n, x / n, y / n, z / n};
  q.canonicalize();
  return q;
}

template <class Role>
Rigid<Role> rigid_from_quat(const UnitQuaternion& q, const Vec3& t) {
  return {rot_from_quat(q), t};
}

}  // namespace obsframe

#endif  // OBSFRAME_SE3_HPP
