#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace svp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Element of SO(3), stored as a 3x3 matrix. Quaternions are accepted and
// produced only at the boundaries (file formats, random sampling).
class Rotation {
 public:
  Rotation() : matrix_(Mat3::Identity()) {}

  static Rotation Identity() { return Rotation(); }
  // Throws kInvalidArgument unless m is orthonormal with det +1 (1e-6).
  static Rotation FromMatrix(const Mat3& m);
  // Normalizes q; throws kInvalidArgument for a zero or non-finite quaternion.
  static Rotation FromQuaternion(const Eigen::Quaterniond& q);
  static Rotation FromAxisAngle(const Vec3& axis, double angle);
  static Rotation AboutZ(double angle) { return FromAxisAngle(Vec3::UnitZ(), angle); }

  const Mat3& matrix() const { return matrix_; }
  // Unit quaternion with w >= 0.
  Eigen::Quaterniond quaternion() const;

  Rotation inverse() const { return Rotation(matrix_.transpose(), 0); }
  Rotation operator*(const Rotation& other) const {
    return Rotation(matrix_ * other.matrix_, 0);
  }
  Vec3 operator*(const Vec3& v) const { return matrix_ * v; }

  bool operator==(const Rotation& other) const { return matrix_ == other.matrix_; }

 private:
  // Trusted constructor for products of valid rotations.
  Rotation(const Mat3& m, int) : matrix_(m) {}

  Mat3 matrix_;
};

// Angle of a^T b in [0, pi].
double GeodesicDistance(const Rotation& a, const Rotation& b);

enum class GridGenerator : uint8_t {
  kSuperFibonacci = 0,
  kRandomUniform = 1,
};

const char* ToString(GridGenerator generator);
GridGenerator ParseGridGenerator(const std::string& name);

struct GridSpec {
  uint32_t n = 0;
  GridGenerator generator = GridGenerator::kSuperFibonacci;
  uint64_t seed = 0;

  bool operator==(const GridSpec&) const = default;
};

// Finite, near-equivolumetric sample of SO(3) used as the hypothesis space for
// every energy query. Immutable once built.
class SO3Grid {
 public:
  // n == 0 throws kInvalidArgument. super_fibonacci ignores the seed.
  static SO3Grid Build(const GridSpec& spec);
  // Rebuilds a grid from explicit unit quaternions (w, x, y, z), as stored
  // in a grid file.
  static SO3Grid FromQuaternions(const GridSpec& spec,
                                 std::vector<std::array<double, 4>> quaternions);

  size_t size() const { return rotations_.size(); }
  const Rotation& operator[](size_t k) const { return rotations_[k]; }
  const std::vector<Rotation>& rotations() const { return rotations_; }
  const std::vector<std::array<double, 4>>& quaternions() const { return quaternions_; }
  const GridSpec& spec() const { return spec_; }
  // Estimated maximum distance from any rotation to its nearest grid point.
  double covering_radius() const { return covering_radius_; }

 private:
  SO3Grid() = default;

  GridSpec spec_;
  std::vector<std::array<double, 4>> quaternions_;
  std::vector<Rotation> rotations_;
  double covering_radius_ = 0.0;
};

struct NearestResult {
  size_t index = 0;
  double distance = 0.0;
};

// Exhaustive nearest grid rotation; ties go to the lowest index.
NearestResult NearestInGrid(const SO3Grid& grid, const Rotation& r);
size_t NearestIndex(const SO3Grid& grid, const Eigen::Quaterniond& q);

// Max nearest-neighbour distance over this many Haar samples drawn from a
// fixed internal seed.
inline constexpr size_t kCoveringSamples = 10000;
double EstimateCoveringRadius(const std::vector<std::array<double, 4>>& quaternions);

// Grid file: "SO3G", u32 version, u32 n, u8 generator, u64 seed, then n unit
// quaternions (w, x, y, z) as float64, little-endian.
std::string SerializeGrid(const SO3Grid& grid);
SO3Grid DeserializeGrid(const std::string& bytes);
void SaveGrid(const SO3Grid& grid, const std::string& path);
SO3Grid LoadGrid(const std::string& path);

}  // namespace svp
