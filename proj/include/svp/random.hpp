#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace svp {

// Seeded generator used for every random draw in the library. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distribution transforms below are written out by hand because the standard
// <random> distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal via Box-Muller (no cached second value).
  double Normal();
  // Uniform on the unit sphere S^2.
  Eigen::Vector3d UnitVector();
  // Haar-uniform unit quaternion (Shoemake's subgroup algorithm).
  Eigen::Quaterniond UniformQuaternion();

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream index
// (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t base, uint64_t stream);

}  // namespace svp
