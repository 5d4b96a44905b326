#include "svp/so3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "binary_io.hpp"
#include "svp/error.hpp"
#include "svp/random.hpp"

namespace svp {

namespace {

constexpr char kGridMagic[4] = {'S', 'O', '3', 'G'};
constexpr uint32_t kGridVersion = 1;
constexpr uint64_t kCoveringSeed = 0x5EEDC0FFEE15BADULL;

// Real root of x^4 = x + 4; with sqrt(2) it drives the two interleaved
// spirals of the super-Fibonacci sampling.
constexpr double kSuperFibPsi = 1.533751168755204288118041413;

std::array<double, 4> ToArray(const Eigen::Quaterniond& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

std::vector<std::array<double, 4>> SuperFibonacci(uint32_t n) {
  std::vector<std::array<double, 4>> out(n);
  const double phi = std::numbers::sqrt2;
  for (uint32_t i = 0; i < n; ++i) {
    const double s = i + 0.5;
    const double r = std::sqrt(s / n);
    const double big_r = std::sqrt(1.0 - s / n);
    const double alpha = 2.0 * std::numbers::pi * s / phi;
    const double beta = 2.0 * std::numbers::pi * s / kSuperFibPsi;
    Eigen::Quaterniond q(r * std::sin(alpha), r * std::cos(alpha),
                         big_r * std::sin(beta), big_r * std::cos(beta));
    q.normalize();
    out[i] = ToArray(q);
  }
  return out;
}

std::vector<std::array<double, 4>> RandomUniform(uint32_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::array<double, 4>> out(n);
  for (auto& q : out) q = ToArray(rng.UniformQuaternion());
  return out;
}

inline double AbsDot(const std::array<double, 4>& a, const double* b) {
  return std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]);
}

size_t NearestByQuaternion(const std::vector<std::array<double, 4>>& quats,
                           const double* q) {
  size_t best = 0;
  double best_dot = -1.0;
  for (size_t k = 0; k < quats.size(); ++k) {
    const double d = AbsDot(quats[k], q);
    if (d > best_dot) {
      best_dot = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

Rotation Rotation::FromMatrix(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "rotation matrix is not finite");
  }
  const double orth = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth > 1e-6 || std::abs(m.determinant() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "matrix is not a proper rotation (orthonormal, det +1)");
  }
  return Rotation(m, 0);
}

Rotation Rotation::FromQuaternion(const Eigen::Quaterniond& q) {
  const double norm = q.norm();
  if (!std::isfinite(norm) || norm < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "quaternion must be non-zero and finite");
  }
  return Rotation(q.normalized().toRotationMatrix(), 0);
}

Rotation Rotation::FromAxisAngle(const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!std::isfinite(norm) || norm < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "rotation axis must be non-zero");
  }
  return Rotation(Eigen::AngleAxisd(angle, axis / norm).toRotationMatrix(), 0);
}

Eigen::Quaterniond Rotation::quaternion() const {
  Eigen::Quaterniond q(matrix_);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return q;
}

double GeodesicDistance(const Rotation& a, const Rotation& b) {
  const Mat3& x = a.matrix();
  const Mat3& y = b.matrix();
  // m = x^T y, spelled out so m is exactly symmetric when x == y.
  double m[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = x(0, i) * y(0, j) + x(1, i) * y(1, j) + x(2, i) * y(2, j);
    }
  }
  const double cos_part = 0.5 * (m[0][0] + m[1][1] + m[2][2] - 1.0);
  const double sx = m[2][1] - m[1][2];
  const double sy = m[0][2] - m[2][0];
  const double sz = m[1][0] - m[0][1];
  const double sin_part = 0.5 * std::sqrt(sx * sx + sy * sy + sz * sz);
  return std::atan2(sin_part, std::clamp(cos_part, -1.0, 1.0));
}

const char* ToString(GridGenerator generator) {
  switch (generator) {
    case GridGenerator::kSuperFibonacci: return "super_fibonacci";
    case GridGenerator::kRandomUniform: return "random_uniform";
  }
  return "unknown";
}

GridGenerator ParseGridGenerator(const std::string& name) {
  if (name == "super_fibonacci") return GridGenerator::kSuperFibonacci;
  if (name == "random_uniform") return GridGenerator::kRandomUniform;
  throw Error(ErrorCode::kInvalidArgument, "unknown grid generator '" + name + "'");
}

SO3Grid SO3Grid::Build(const GridSpec& spec) {
  SVP_CHECK_ARG(spec.n >= 1, "grid size must be at least 1");
  switch (spec.generator) {
    case GridGenerator::kSuperFibonacci:
      return FromQuaternions(spec, SuperFibonacci(spec.n));
    case GridGenerator::kRandomUniform:
      return FromQuaternions(spec, RandomUniform(spec.n, spec.seed));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown grid generator");
}

SO3Grid SO3Grid::FromQuaternions(const GridSpec& spec,
                                 std::vector<std::array<double, 4>> quaternions) {
  SVP_CHECK_ARG(!quaternions.empty(), "grid size must be at least 1");
  SVP_CHECK_ARG(quaternions.size() == spec.n, "quaternion count does not match grid spec");
  SO3Grid grid;
  grid.spec_ = spec;
  grid.rotations_.reserve(quaternions.size());
  for (const auto& q : quaternions) {
    grid.rotations_.push_back(
        Rotation::FromQuaternion(Eigen::Quaterniond(q[0], q[1], q[2], q[3])));
  }
  grid.quaternions_ = std::move(quaternions);
  grid.covering_radius_ = EstimateCoveringRadius(grid.quaternions_);
  return grid;
}

NearestResult NearestInGrid(const SO3Grid& grid, const Rotation& r) {
  const size_t index = NearestIndex(grid, r.quaternion());
  return {index, GeodesicDistance(grid[index], r)};
}

size_t NearestIndex(const SO3Grid& grid, const Eigen::Quaterniond& q) {
  const double query[4] = {q.w(), q.x(), q.y(), q.z()};
  return NearestByQuaternion(grid.quaternions(), query);
}

double EstimateCoveringRadius(const std::vector<std::array<double, 4>>& quaternions) {
  Rng rng(kCoveringSeed);
  double worst_dot = 1.0;
  for (size_t s = 0; s < kCoveringSamples; ++s) {
    const Eigen::Quaterniond q = rng.UniformQuaternion();
    const double query[4] = {q.w(), q.x(), q.y(), q.z()};
    double best = 0.0;
    for (const auto& g : quaternions) best = std::max(best, AbsDot(g, query));
    worst_dot = std::min(worst_dot, best);
  }
  // Rotation angle between unit quaternions p, q is 2 acos |p . q|.
  return 2.0 * std::acos(std::clamp(worst_dot, 0.0, 1.0));
}

std::string SerializeGrid(const SO3Grid& grid) {
  detail::ByteWriter w;
  w.Raw(std::string_view(kGridMagic, 4));
  w.U32(kGridVersion);
  w.U32(grid.spec().n);
  w.U8(static_cast<uint8_t>(grid.spec().generator));
  w.U64(grid.spec().seed);
  for (const auto& q : grid.quaternions()) {
    for (double c : q) w.F64(c);
  }
  return w.Take();
}

SO3Grid DeserializeGrid(const std::string& bytes) {
  detail::ByteReader r(bytes, ErrorCode::kFormat);
  if (r.Raw(4) != std::string_view(kGridMagic, 4)) {
    throw Error(ErrorCode::kFormat, "not a grid file (bad magic)");
  }
  const uint32_t version = r.U32();
  if (version != kGridVersion) {
    throw Error(ErrorCode::kFormat, "unsupported grid file version " + std::to_string(version));
  }
  GridSpec spec;
  spec.n = r.U32();
  const uint8_t generator = r.U8();
  if (generator > static_cast<uint8_t>(GridGenerator::kRandomUniform)) {
    throw Error(ErrorCode::kFormat, "unknown grid generator id");
  }
  spec.generator = static_cast<GridGenerator>(generator);
  spec.seed = r.U64();
  if (spec.n == 0 || r.remaining() != size_t{spec.n} * 32) {
    throw Error(ErrorCode::kFormat, "grid payload size does not match n");
  }
  std::vector<std::array<double, 4>> quats(spec.n);
  for (auto& q : quats) {
    for (double& c : q) c = r.F64();
    const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
      throw Error(ErrorCode::kFormat, "grid quaternion is not unit length");
    }
  }
  return SO3Grid::FromQuaternions(spec, std::move(quats));
}

void SaveGrid(const SO3Grid& grid, const std::string& path) {
  detail::WriteFileAtomic(path, SerializeGrid(grid));
}

SO3Grid LoadGrid(const std::string& path) {
  return DeserializeGrid(detail::ReadFile(path));
}

}  // namespace svp
