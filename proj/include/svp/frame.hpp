#pragma once

#include <span>
#include <vector>

#include "svp/so3.hpp"

namespace svp {

// World-to-camera extrinsics: x_cam = rotation * x_world + translation.
struct CameraPose {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  // Camera center in world coordinates, -R^T t.
  Vec3 center() const { return -(rotation.matrix().transpose() * translation); }
  // World-space direction of the camera's +z (viewing) axis.
  Vec3 optical_axis() const { return rotation.matrix().row(2).transpose(); }

  static CameraPose FromCenter(const Rotation& rotation, const Vec3& center) {
    return {rotation, -(rotation * center)};
  }
};

inline constexpr double kMaxAxisConditionNumber = 1e8;

// Least-squares point closest to every optical axis, from the normal equations
// sum_i (I - d_i d_i^T) p = sum_i (I - d_i d_i^T) o_i. Throws
// kDegenerateGeometry when fewer than two poses are given or the 3x3 system
// has condition number >= 1e8 (near-parallel axes).
Vec3 ClosestPointToAxes(std::span<const CameraPose> poses);

struct SceneFrame {
  Vec3 lookat = Vec3::Zero();
  double scale = 1.0;
  std::vector<Vec3> targets;
};

// Translations after moving the world origin to `origin` and scaling by
// `scale`: scale * (t_i + R_i origin).
std::vector<Vec3> TargetsForOrigin(std::span<const CameraPose> poses, const Vec3& origin,
                                   double scale);

// Look-at-centered frame: origin at the point closest to the optical axes,
// scaled so the first camera's target has unit norm. Throws kDegenerateScale
// when the first camera sits on the look-at point.
SceneFrame NormalizeScene(std::span<const CameraPose> poses);

// Same scale as NormalizeScene, origin at the first camera's center.
std::vector<Vec3> FirstCameraFrameTargets(std::span<const CameraPose> poses);

}  // namespace svp
