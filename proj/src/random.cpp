#include "svp/random.hpp"

#include <cmath>
#include <numbers>

namespace svp {

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) {
    u1 = Uniform();
  }
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::Vector3d Rng::UnitVector() {
  const double z = 2.0 * Uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * Uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Eigen::Quaterniond Rng::UniformQuaternion() {
  const double u1 = Uniform();
  const double u2 = Uniform();
  const double u3 = Uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double t2 = 2.0 * std::numbers::pi * u2;
  const double t3 = 2.0 * std::numbers::pi * u3;
  Eigen::Quaterniond q(b * std::cos(t3), a * std::sin(t2), a * std::cos(t2),
                       b * std::sin(t3));
  q.normalize();
  return q;
}

uint64_t DeriveSeed(uint64_t base, uint64_t stream) {
  uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace svp
