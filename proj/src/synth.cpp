#include "svp/synth.hpp"

#include <cmath>
#include <numbers>

#include "svp/error.hpp"
#include "svp/eval.hpp"
#include "svp/random.hpp"

namespace svp {

Rotation LookAtRotation(const Vec3& center, const Vec3& target, double roll) {
  const Vec3 forward = target - center;
  SVP_CHECK_ARG(forward.norm() > 1e-12, "camera center coincides with its target");
  const Vec3 z = forward.normalized();
  const Vec3 up = std::abs(z.z()) > 0.99 ? Vec3::UnitY() : Vec3::UnitZ();
  const Vec3 x = up.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 cam_to_world;
  cam_to_world << x, y, z;
  const Rotation world_from_cam = Rotation::FromMatrix(cam_to_world) * Rotation::AboutZ(roll);
  return world_from_cam.inverse();
}

SyntheticScene GenerateScene(const RigSpec& spec) {
  SVP_CHECK_ARG(spec.num_cameras >= 2, "a rig needs at least two cameras");
  SVP_CHECK_ARG(spec.num_cameras <= 65535, "too many cameras");
  SVP_CHECK_ARG(spec.jitter >= 0.0 && spec.jitter <= std::numbers::pi / 4,
                "jitter must lie in [0, pi/4]");
  SVP_CHECK_ARG(spec.radius_min > 0.0 && spec.radius_max >= spec.radius_min &&
                    std::isfinite(spec.radius_max),
                "radii must be positive with radius_min <= radius_max");
  SVP_CHECK_ARG(spec.lookat.allFinite(), "look-at point must be finite");

  Rng rng(spec.seed);
  SyntheticScene scene;
  scene.spec = spec;
  scene.poses.reserve(spec.num_cameras);
  for (size_t c = 0; c < spec.num_cameras; ++c) {
    const Vec3 direction = rng.UnitVector();
    const double radius = rng.Uniform(spec.radius_min, spec.radius_max);
    const double roll = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const Vec3 tilt_axis = rng.UnitVector();
    const double tilt = rng.Uniform(0.0, spec.jitter);

    const Vec3 center = spec.lookat + radius * direction;
    Rotation rotation = LookAtRotation(center, spec.lookat, roll);
    if (spec.jitter > 0.0) {
      // Tilt the camera's frame in world coordinates about its own center.
      rotation = rotation * Rotation::FromAxisAngle(tilt_axis, tilt).inverse();
    }
    scene.poses.push_back(CameraPose::FromCenter(rotation, center));
  }
  scene.sigma = SceneScale(scene.poses);
  return scene;
}

std::unique_ptr<SymmetricModeScorer> SceneToScorer(std::span<const CameraPose> gt,
                                                   const ScorerSpec& spec) {
  SVP_CHECK_ARG(gt.size() >= 2, "a scorer needs at least two cameras");
  SVP_CHECK_ARG(spec.kappa > 0.0, "kappa must be positive");
  SVP_CHECK_ARG(spec.noise_angle >= 0.0, "noise angle must be non-negative");
  for (const PairSymmetry& s : spec.symmetries) {
    SVP_CHECK_ARG(s.k >= 1, "symmetry order must be at least 1");
    SVP_CHECK_ARG(s.i != s.j && s.i < gt.size() && s.j < gt.size(),
                  "symmetry refers to an invalid camera pair");
    SVP_CHECK_ARG(s.axis.norm() > 1e-12, "symmetry axis must be non-zero");
  }

  const bool noisy = spec.noise_angle > 0.0;
  auto scorer = std::make_unique<SymmetricModeScorer>(spec.kappa, /*directional=*/noisy);
  Rng rng(spec.seed);

  auto symmetry_for = [&](size_t i, size_t j) -> const PairSymmetry* {
    for (const PairSymmetry& s : spec.symmetries) {
      if ((s.i == i && s.j == j) || (s.i == j && s.j == i)) return &s;
    }
    return nullptr;
  };

  auto modes_for = [&](size_t i, size_t j, const Rotation& base) {
    const PairSymmetry* sym = symmetry_for(i, j);
    if (sym == nullptr || sym->k == 1) return std::vector<Rotation>{base};
    // Object axis expressed in camera i's frame.
    return SymmetryModes(base, gt[i].rotation * sym->axis.normalized(), sym->k);
  };

  for (size_t i = 0; i < gt.size(); ++i) {
    for (size_t j = 0; j < gt.size(); ++j) {
      if (i == j) continue;
      Rotation base = RelativeRotation(gt[i].rotation, gt[j].rotation);
      if (noisy) {
        const Vec3 axis = rng.UnitVector();
        const double angle = rng.Uniform(0.0, spec.noise_angle);
        base = Rotation::FromAxisAngle(axis, angle) * base;
      } else if (j < i) {
        std::vector<Rotation> inverse;
        for (const Rotation& m : scorer->modes(j, i)) inverse.push_back(m.inverse());
        scorer->SetModes(i, j, std::move(inverse));
        continue;
      }
      scorer->SetModes(i, j, modes_for(i, j, base));
    }
  }
  return scorer;
}

}  // namespace svp
