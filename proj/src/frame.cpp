#include "svp/frame.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "svp/error.hpp"

namespace svp {

Vec3 ClosestPointToAxes(std::span<const CameraPose> poses) {
  if (poses.size() < 2) {
    throw Error(ErrorCode::kDegenerateGeometry, "closest point to axes needs at least two cameras");
  }
  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();
  for (const CameraPose& pose : poses) {
    const Vec3 d = pose.optical_axis().normalized();
    const Mat3 projector = Mat3::Identity() - d * d.transpose();
    a += projector;
    b += projector * pose.center();
  }
  // a is symmetric positive semi-definite; eigenvalues come back ascending.
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(a);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(2);
  if (!(lo > 0.0) || hi / lo >= kMaxAxisConditionNumber) {
    std::ostringstream msg;
    msg << "optical axes are (nearly) parallel; normal matrix eigenvalues " << lo << ", " << hi;
    throw Error(ErrorCode::kDegenerateGeometry, msg.str());
  }
  return eig.eigenvectors() *
         (eig.eigenvalues().cwiseInverse().asDiagonal() * (eig.eigenvectors().transpose() * b));
}

std::vector<Vec3> TargetsForOrigin(std::span<const CameraPose> poses, const Vec3& origin,
                                   double scale) {
  std::vector<Vec3> out;
  out.reserve(poses.size());
  for (const CameraPose& pose : poses) {
    out.push_back(scale * (pose.translation + pose.rotation * origin));
  }
  return out;
}

namespace {

double UnitScale(const CameraPose& first, const Vec3& lookat) {
  const double distance = (first.translation + first.rotation * lookat).norm();
  if (!(distance > 1e-9)) {
    throw Error(ErrorCode::kDegenerateScale, "first camera coincides with the look-at point");
  }
  return 1.0 / distance;
}

}  // namespace

SceneFrame NormalizeScene(std::span<const CameraPose> poses) {
  SceneFrame frame;
  frame.lookat = ClosestPointToAxes(poses);
  frame.scale = UnitScale(poses.front(), frame.lookat);
  frame.targets = TargetsForOrigin(poses, frame.lookat, frame.scale);
  return frame;
}

std::vector<Vec3> FirstCameraFrameTargets(std::span<const CameraPose> poses) {
  const Vec3 lookat = ClosestPointToAxes(poses);
  const double scale = UnitScale(poses.front(), lookat);
  return TargetsForOrigin(poses, poses.front().center(), scale);
}

}  // namespace svp
