#pragma once

#include <array>
#include <span>
#include <vector>

#include "svp/frame.hpp"
#include "svp/so3.hpp"

namespace svp {

// x -> scale * rotation * x + translation.
struct SimilarityTransform {
  double scale = 1.0;
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 Apply(const Vec3& x) const { return scale * (rotation * x) + translation; }
  Vec3 ApplyInverse(const Vec3& y) const {
    return rotation.inverse() * (y - translation) / scale;
  }
};

// Least-squares similarity mapping `source` onto `target` (Umeyama, with the
// reflection correction so the rotation is proper). Needs N >= 2 equal-length
// inputs; throws kDegenerateAlignment when either point set collapses to a
// single point.
SimilarityTransform UmeyamaAlign(std::span<const Vec3> source, std::span<const Vec3> target);

// Distance from the centroid of the camera centers to the furthest one.
double SceneScale(std::span<const CameraPose> poses);

// Geodesic error (radians) between predicted and ground-truth relative
// rotations R_i R_j^T, over pairs i < j in lexicographic order. Invariant to
// a change of world frame applied to either set.
std::vector<double> RelativeRotationErrors(std::span<const Rotation> pred,
                                           std::span<const Rotation> gt);
double RotationAccuracy(std::span<const Rotation> pred, std::span<const Rotation> gt,
                        double threshold_deg);

// Per-camera distance between ground-truth centers and similarity-aligned
// predicted centers. Two cameras always align exactly, so N = 2 yields zeros
// without solving (coincident predictions included).
std::vector<double> CameraCenterErrors(std::span<const CameraPose> pred,
                                       std::span<const CameraPose> gt);
double CameraCenterAccuracy(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                            double sigma, double threshold);

struct TranslationAlignment {
  double scale = 1.0;
  Vec3 offset = Vec3::Zero();
};

// argmin_{s, t} sum_i || t_gt_i - (s * t_pred_i + R_i t) ||^2 by linear least
// squares, with R_i the predicted rotations (the frame being re-expressed).
// Throws kDegenerateAlignment for a rank-deficient design and
// kOrientationFlip when the optimum has s <= 0.
TranslationAlignment TranslationAlign(std::span<const CameraPose> pred,
                                      std::span<const CameraPose> gt);
std::vector<double> TranslationErrors(std::span<const CameraPose> pred,
                                      std::span<const CameraPose> gt);
double TranslationAccuracy(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                           double sigma, double threshold = 0.1);

inline constexpr size_t kAucSteps = 1000;

// Mean, over thresholds max * k / 1000 for k = 1..1000, of the fraction of
// errors strictly below the threshold.
double AccuracyCurveAuc(std::span<const double> errors, double max_threshold);

double FractionBelow(std::span<const double> errors, double threshold);

inline constexpr std::array<double, 4> kRotationThresholdsDeg = {5.0, 10.0, 15.0, 30.0};
inline constexpr std::array<double, 3> kCenterThresholds = {0.1, 0.2, 0.3};
inline constexpr double kTranslationThreshold = 0.1;
inline constexpr double kRotationAucMaxDeg = 60.0;
inline constexpr double kCenterAucMax = 0.4;

struct EvalReport {
  size_t num_cameras = 0;
  std::array<double, 4> rotation_accuracy{};       // at kRotationThresholdsDeg
  std::array<double, 3> camera_center_accuracy{};  // at kCenterThresholds (x sigma)
  double translation_accuracy = 0.0;               // at kTranslationThreshold (x sigma)
  double rotation_auc = 0.0;                       // over [0, 60] degrees
  double center_auc = 0.0;                         // over [0, 0.4] sigma
  double sigma = 0.0;
};

// Raw per-item errors behind a report: relative rotation errors in degrees
// (pairs i < j), aligned center and translation errors in scene units.
struct EvalErrors {
  std::vector<double> rotation_deg;
  std::vector<double> center;
  std::vector<double> translation;
};

EvalErrors ComputeErrors(std::span<const CameraPose> pred, std::span<const CameraPose> gt);
EvalReport ReportFromErrors(const EvalErrors& errors, size_t num_cameras, double sigma);
EvalReport Evaluate(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                    double sigma);

}  // namespace svp
