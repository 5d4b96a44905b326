#include "svp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "svp/error.hpp"

namespace svp {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void CheckSameLength(size_t a, size_t b) {
  SVP_CHECK_ARG(a == b, "prediction and ground truth differ in length");
  SVP_CHECK_ARG(a >= 2, "at least two cameras are required");
}

std::vector<Vec3> Centers(std::span<const CameraPose> poses) {
  std::vector<Vec3> out;
  out.reserve(poses.size());
  for (const CameraPose& p : poses) out.push_back(p.center());
  return out;
}

std::vector<Rotation> Rotations(std::span<const CameraPose> poses) {
  std::vector<Rotation> out;
  out.reserve(poses.size());
  for (const CameraPose& p : poses) out.push_back(p.rotation);
  return out;
}

}  // namespace

SimilarityTransform UmeyamaAlign(std::span<const Vec3> source, std::span<const Vec3> target) {
  CheckSameLength(source.size(), target.size());
  const double n = static_cast<double>(source.size());

  Vec3 mu_s = Vec3::Zero();
  Vec3 mu_t = Vec3::Zero();
  for (size_t i = 0; i < source.size(); ++i) {
    mu_s += source[i];
    mu_t += target[i];
  }
  mu_s /= n;
  mu_t /= n;

  double var_s = 0.0;
  double var_t = 0.0;
  double magnitude = 0.0;
  Mat3 cov = Mat3::Zero();
  for (size_t i = 0; i < source.size(); ++i) {
    const Vec3 ds = source[i] - mu_s;
    const Vec3 dt = target[i] - mu_t;
    var_s += ds.squaredNorm();
    var_t += dt.squaredNorm();
    magnitude += source[i].squaredNorm();
    cov += dt * ds.transpose();
  }
  var_s /= n;
  var_t /= n;
  cov /= n;
  if (!(var_s > 1e-20 * std::max(1.0, magnitude / n))) {
    throw Error(ErrorCode::kDegenerateAlignment, "all source points coincide");
  }

  const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 sign = Vec3::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) sign(2) = -1.0;

  SimilarityTransform out;
  const Mat3 r = svd.matrixU() * sign.asDiagonal() * svd.matrixV().transpose();
  out.rotation = Rotation::FromMatrix(r);
  out.scale = svd.singularValues().dot(sign) / var_s;
  if (!(out.scale > 0.0) || !(var_t > 0.0)) {
    throw Error(ErrorCode::kDegenerateAlignment, "all target points coincide");
  }
  out.translation = mu_t - out.scale * (out.rotation * mu_s);
  return out;
}

double SceneScale(std::span<const CameraPose> poses) {
  SVP_CHECK_ARG(!poses.empty(), "scene scale needs at least one camera");
  const std::vector<Vec3> centers = Centers(poses);
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& c : centers) centroid += c;
  centroid /= static_cast<double>(centers.size());
  double sigma = 0.0;
  for (const Vec3& c : centers) sigma = std::max(sigma, (c - centroid).norm());
  return sigma;
}

std::vector<double> RelativeRotationErrors(std::span<const Rotation> pred,
                                           std::span<const Rotation> gt) {
  CheckSameLength(pred.size(), gt.size());
  std::vector<double> errors;
  errors.reserve(pred.size() * (pred.size() - 1) / 2);
  for (size_t i = 0; i < pred.size(); ++i) {
    for (size_t j = i + 1; j < pred.size(); ++j) {
      errors.push_back(GeodesicDistance(pred[i] * pred[j].inverse(), gt[i] * gt[j].inverse()));
    }
  }
  return errors;
}

double RotationAccuracy(std::span<const Rotation> pred, std::span<const Rotation> gt,
                        double threshold_deg) {
  return FractionBelow(RelativeRotationErrors(pred, gt), threshold_deg / kRadToDeg);
}

std::vector<double> CameraCenterErrors(std::span<const CameraPose> pred,
                                       std::span<const CameraPose> gt) {
  CheckSameLength(pred.size(), gt.size());
  if (pred.size() == 2) return {0.0, 0.0};
  const std::vector<Vec3> pred_centers = Centers(pred);
  const std::vector<Vec3> gt_centers = Centers(gt);
  const SimilarityTransform sim = UmeyamaAlign(pred_centers, gt_centers);
  std::vector<double> errors;
  errors.reserve(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    errors.push_back((gt_centers[i] - sim.Apply(pred_centers[i])).norm());
  }
  return errors;
}

double CameraCenterAccuracy(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                            double sigma, double threshold) {
  SVP_CHECK_ARG(sigma > 0.0, "scene scale must be positive");
  return FractionBelow(CameraCenterErrors(pred, gt), threshold * sigma);
}

TranslationAlignment TranslationAlign(std::span<const CameraPose> pred,
                                      std::span<const CameraPose> gt) {
  CheckSameLength(pred.size(), gt.size());
  const Eigen::Index rows = static_cast<Eigen::Index>(3 * pred.size());
  Eigen::MatrixXd design(rows, 4);
  Eigen::VectorXd rhs(rows);
  for (size_t i = 0; i < pred.size(); ++i) {
    const Eigen::Index r = static_cast<Eigen::Index>(3 * i);
    design.block<3, 1>(r, 0) = pred[i].translation;
    design.block<3, 3>(r, 1) = pred[i].rotation.matrix();
    rhs.segment<3>(r) = gt[i].translation;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 1e-10 * sv(0))) {
    throw Error(ErrorCode::kDegenerateAlignment, "translation alignment design is rank-deficient");
  }
  const Eigen::Vector4d x = svd.solve(rhs);
  if (!(x(0) > 0.0)) {
    throw Error(ErrorCode::kOrientationFlip, "optimal translation scale is not positive");
  }
  return {x(0), x.tail<3>()};
}

std::vector<double> TranslationErrors(std::span<const CameraPose> pred,
                                      std::span<const CameraPose> gt) {
  const TranslationAlignment align = TranslationAlign(pred, gt);
  std::vector<double> errors;
  errors.reserve(pred.size());
  for (size_t i = 0; i < pred.size(); ++i) {
    const Vec3 aligned = align.scale * pred[i].translation + pred[i].rotation * align.offset;
    errors.push_back((gt[i].translation - aligned).norm());
  }
  return errors;
}

double TranslationAccuracy(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                           double sigma, double threshold) {
  SVP_CHECK_ARG(sigma > 0.0, "scene scale must be positive");
  return FractionBelow(TranslationErrors(pred, gt), threshold * sigma);
}

double FractionBelow(std::span<const double> errors, double threshold) {
  SVP_CHECK_ARG(!errors.empty(), "error list is empty");
  const auto hits = std::count_if(errors.begin(), errors.end(),
                                  [threshold](double e) { return e < threshold; });
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

double AccuracyCurveAuc(std::span<const double> errors, double max_threshold) {
  SVP_CHECK_ARG(max_threshold > 0.0, "max threshold must be positive");
  SVP_CHECK_ARG(!errors.empty(), "error list is empty");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (size_t k = 1; k <= kAucSteps; ++k) {
    const double threshold = max_threshold * static_cast<double>(k) / kAucSteps;
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), threshold) - sorted.begin();
    total += static_cast<double>(below) / static_cast<double>(sorted.size());
  }
  return total / kAucSteps;
}

EvalErrors ComputeErrors(std::span<const CameraPose> pred, std::span<const CameraPose> gt) {
  CheckSameLength(pred.size(), gt.size());
  EvalErrors errors;
  errors.rotation_deg = RelativeRotationErrors(Rotations(pred), Rotations(gt));
  for (double& e : errors.rotation_deg) e *= kRadToDeg;
  errors.center = CameraCenterErrors(pred, gt);
  errors.translation = TranslationErrors(pred, gt);
  return errors;
}

EvalReport ReportFromErrors(const EvalErrors& errors, size_t num_cameras, double sigma) {
  SVP_CHECK_ARG(sigma > 0.0, "scene scale must be positive");
  EvalReport report;
  report.num_cameras = num_cameras;
  report.sigma = sigma;
  for (size_t k = 0; k < kRotationThresholdsDeg.size(); ++k) {
    report.rotation_accuracy[k] = FractionBelow(errors.rotation_deg, kRotationThresholdsDeg[k]);
  }
  report.rotation_auc = AccuracyCurveAuc(errors.rotation_deg, kRotationAucMaxDeg);
  for (size_t k = 0; k < kCenterThresholds.size(); ++k) {
    report.camera_center_accuracy[k] = FractionBelow(errors.center, kCenterThresholds[k] * sigma);
  }
  report.center_auc = AccuracyCurveAuc(errors.center, kCenterAucMax * sigma);
  report.translation_accuracy = FractionBelow(errors.translation, kTranslationThreshold * sigma);
  return report;
}

EvalReport Evaluate(std::span<const CameraPose> pred, std::span<const CameraPose> gt,
                    double sigma) {
  SVP_CHECK_ARG(sigma > 0.0, "scene scale must be positive");
  return ReportFromErrors(ComputeErrors(pred, gt), pred.size(), sigma);
}

}  // namespace svp
