#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "svp/energy.hpp"
#include "svp/frame.hpp"

namespace svp {

// Everything needed to regenerate a synthetic rig bit-for-bit.
struct RigSpec {
  size_t num_cameras = 8;
  double radius_min = 1.0;
  double radius_max = 1.0;
  double jitter = 0.0;  // max angle (radians) between optical axis and look-at ray
  Vec3 lookat = Vec3::Zero();
  uint64_t seed = 0;

  bool operator==(const RigSpec&) const = default;
};

struct SyntheticScene {
  RigSpec spec;
  std::vector<CameraPose> poses;
  double sigma = 0.0;
};

// World-to-camera rotation whose +z axis points from `center` at `target`,
// rolled by `roll` radians about that axis.
Rotation LookAtRotation(const Vec3& center, const Vec3& target, double roll);

// Camera centers at lookat + r * u with u uniform on the sphere and r uniform
// in [radius_min, radius_max]; each camera looks at the target, with a
// uniformly random roll, and its viewing direction is tilted by a random
// axis-angle of magnitude <= jitter. Throws kInvalidArgument for
// num_cameras < 2, jitter outside [0, pi/4], or non-positive / inverted radii.
SyntheticScene GenerateScene(const RigSpec& spec);

// Gauge-invariant relative rotation between two world-to-camera rotations,
// a * b^T (the solver's W_a^T W_b).
inline Rotation RelativeRotation(const Rotation& a, const Rotation& b) { return a * b.inverse(); }

// k-fold symmetry of the observed object about `axis` (world frame), applied
// to the unordered pair {i, j}.
struct PairSymmetry {
  size_t i = 0;
  size_t j = 0;
  Vec3 axis = Vec3::UnitZ();
  int k = 1;
};

struct ScorerSpec {
  double kappa = 50.0;
  std::vector<PairSymmetry> symmetries;
  double noise_angle = 0.0;  // radians
  uint64_t seed = 0;
};

// Synthetic energies for every ordered pair of `gt`. The base mode is the true
// relative rotation, tilted by a random rotation of angle <= noise_angle drawn
// independently per ordered pair; symmetric pairs get k copies rotated about
// the object axis. Without noise, (j, i) modes are exactly the inverses of
// (i, j) modes and the scorer is non-directional.
std::unique_ptr<SymmetricModeScorer> SceneToScorer(std::span<const CameraPose> gt,
                                                   const ScorerSpec& spec);

}  // namespace svp
