#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "svp/so3.hpp"
#include "test_util.hpp"

namespace svp {
namespace {

using testing::RandomRotation;
using testing::ThrowsCode;

constexpr double kPi = std::numbers::pi;

TEST(Rotation, FromMatrixRejectsNonRotations) {
  Mat3 scaled = 2.0 * Mat3::Identity();
  EXPECT_TRUE(ThrowsCode([&] { Rotation::FromMatrix(scaled); }, ErrorCode::kInvalidArgument));
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_TRUE(ThrowsCode([&] { Rotation::FromMatrix(reflection); }, ErrorCode::kInvalidArgument));
  EXPECT_TRUE(ThrowsCode([] { Rotation::FromQuaternion(Eigen::Quaterniond(0, 0, 0, 0)); },
                         ErrorCode::kInvalidArgument));
}

TEST(Rotation, OrthonormalAndQuaternionRoundTrip) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Rotation r = RandomRotation(rng);
    const Mat3& m = r.matrix();
    EXPECT_LT((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-9);
    const Rotation back = Rotation::FromQuaternion(r.quaternion());
    EXPECT_NEAR(GeodesicDistance(r, back), 0.0, 1e-9);
    EXPECT_GE(r.quaternion().w(), 0.0);
  }
}

TEST(Geodesic, Examples) {
  Rng rng(1);
  const Rotation r = RandomRotation(rng);
  EXPECT_EQ(GeodesicDistance(r, r), 0.0);
  EXPECT_NEAR(GeodesicDistance(Rotation::Identity(), Rotation::AboutZ(kPi / 2)), kPi / 2, 1e-12);
  EXPECT_NEAR(GeodesicDistance(Rotation::Identity(), Rotation::AboutZ(kPi)), kPi, 1e-12);
}

TEST(Geodesic, MatchesQuaternionOracle) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Rotation a = RandomRotation(rng);
    const Rotation b = RandomRotation(rng);
    const double dot = std::min(1.0, std::abs(a.quaternion().dot(b.quaternion())));
    EXPECT_NEAR(GeodesicDistance(a, b), 2.0 * std::acos(dot), 1e-7);
    EXPECT_EQ(GeodesicDistance(a, b), GeodesicDistance(b, a));
  }
}

TEST(Geodesic, LeftInvariantAndTriangle) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const Rotation a = RandomRotation(rng);
    const Rotation b = RandomRotation(rng);
    const Rotation c = RandomRotation(rng);
    const Rotation q = RandomRotation(rng);
    EXPECT_NEAR(GeodesicDistance(q * a, q * b), GeodesicDistance(a, b), 1e-7);
    EXPECT_LE(GeodesicDistance(a, c), GeodesicDistance(a, b) + GeodesicDistance(b, c) + 1e-7);
  }
}

TEST(Grid, ZeroSizeRejected) {
  EXPECT_TRUE(ThrowsCode([] { SO3Grid::Build({0, GridGenerator::kSuperFibonacci, 0}); },
                         ErrorCode::kInvalidArgument));
}

TEST(Grid, SinglePointCoverIsLarge) {
  const SO3Grid g = SO3Grid::Build({1, GridGenerator::kRandomUniform, 7});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_GE(g.covering_radius(), kPi / 2);
}

TEST(Grid, DeterministicAndSeedIndependent) {
  const SO3Grid a = SO3Grid::Build({4608, GridGenerator::kSuperFibonacci, 0});
  const SO3Grid b = SO3Grid::Build({4608, GridGenerator::kSuperFibonacci, 0});
  const SO3Grid c = SO3Grid::Build({4608, GridGenerator::kSuperFibonacci, 99});
  EXPECT_EQ(a.quaternions(), b.quaternions());
  EXPECT_EQ(a.quaternions(), c.quaternions());
  EXPECT_EQ(a.covering_radius(), b.covering_radius());
  EXPECT_GT(a.covering_radius(), 0.0);
  EXPECT_LT(a.covering_radius(), 0.3);

  const SO3Grid r1 = SO3Grid::Build({500, GridGenerator::kRandomUniform, 5});
  const SO3Grid r2 = SO3Grid::Build({500, GridGenerator::kRandomUniform, 5});
  const SO3Grid r3 = SO3Grid::Build({500, GridGenerator::kRandomUniform, 6});
  EXPECT_EQ(r1.quaternions(), r2.quaternions());
  EXPECT_NE(r1.quaternions(), r3.quaternions());
}

TEST(Grid, CoveringRadiusOracle) {
  // Independent estimate: same sample count, different seed, plain geodesic scan.
  const SO3Grid g = SO3Grid::Build({72, GridGenerator::kSuperFibonacci, 0});
  Rng rng(12345);
  double worst = 0.0;
  for (int t = 0; t < 3000; ++t) {
    const Rotation q = RandomRotation(rng);
    double best = kPi;
    for (size_t k = 0; k < g.size(); ++k) best = std::min(best, GeodesicDistance(q, g[k]));
    worst = std::max(worst, best);
  }
  EXPECT_NEAR(g.covering_radius(), worst, 0.1);
}

TEST(Grid, RotationsDistinct) {
  for (const GridSpec spec : {GridSpec{576, GridGenerator::kSuperFibonacci, 0},
                              GridSpec{576, GridGenerator::kRandomUniform, 3}}) {
    const SO3Grid g = SO3Grid::Build(spec);
    for (size_t a = 0; a < g.size(); ++a) {
      for (size_t b = a + 1; b < g.size(); ++b) {
        ASSERT_GT(GeodesicDistance(g[a], g[b]), 1e-6) << a << " " << b;
      }
    }
  }
}

TEST(Grid, SuperFibonacciCoverShrinksWithDoubling) {
  double previous = kPi;
  for (uint32_t n = 72; n <= 4608; n *= 2) {
    const double cover = SO3Grid::Build({n, GridGenerator::kSuperFibonacci, 0}).covering_radius();
    EXPECT_LE(cover, previous) << "n = " << n;
    previous = cover;
  }
}

TEST(Grid, NearestOfGridPoint) {
  const SO3Grid g = SO3Grid::Build({4608, GridGenerator::kSuperFibonacci, 0});
  for (size_t k : {size_t{0}, size_t{17}, size_t{2000}, size_t{4607}}) {
    const NearestResult r = NearestInGrid(g, g[k]);
    EXPECT_EQ(r.index, k);
    EXPECT_NEAR(r.distance, 0.0, 1e-7);
  }
}

TEST(Grid, NearestMatchesLinearScan) {
  const SO3Grid g = SO3Grid::Build({1000, GridGenerator::kRandomUniform, 4});
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const Rotation q = RandomRotation(rng);
    size_t best = 0;
    double best_d = kPi + 1;
    for (size_t k = 0; k < g.size(); ++k) {
      const double d = GeodesicDistance(g[k], q);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    const NearestResult r = NearestInGrid(g, q);
    EXPECT_EQ(r.index, best);
    EXPECT_NEAR(r.distance, best_d, 1e-9);
  }
}

TEST(Grid, NearestTieGoesToLowerIndex) {
  const auto q = [](double angle) {
    const Eigen::Quaterniond e = Rotation::AboutZ(angle).quaternion();
    return std::array<double, 4>{e.w(), e.x(), e.y(), e.z()};
  };
  const GridSpec spec{2, GridGenerator::kRandomUniform, 0};
  const SO3Grid forward = SO3Grid::FromQuaternions(spec, {q(0.3), q(-0.3)});
  const SO3Grid backward = SO3Grid::FromQuaternions(spec, {q(-0.3), q(0.3)});
  EXPECT_EQ(NearestInGrid(forward, Rotation::Identity()).index, 0u);
  EXPECT_EQ(NearestInGrid(backward, Rotation::Identity()).index, 0u);
  EXPECT_NEAR(NearestInGrid(forward, Rotation::Identity()).distance, 0.3, 1e-12);
}

TEST(Grid, SerializationRoundTrip) {
  const SO3Grid g = SO3Grid::Build({300, GridGenerator::kRandomUniform, 42});
  const std::string bytes = SerializeGrid(g);
  EXPECT_EQ(bytes.substr(0, 4), "SO3G");
  EXPECT_EQ(bytes.size(), 4u + 4 + 4 + 1 + 8 + 300 * 32);
  const SO3Grid back = DeserializeGrid(bytes);
  EXPECT_EQ(back.spec(), g.spec());
  EXPECT_EQ(back.quaternions(), g.quaternions());
  EXPECT_EQ(SerializeGrid(back), bytes);

  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_TRUE(ThrowsCode([&] { DeserializeGrid(bad); }, ErrorCode::kFormat));
  EXPECT_TRUE(ThrowsCode([&] { DeserializeGrid(bytes.substr(0, bytes.size() - 3)); },
                         ErrorCode::kFormat));
}

}  // namespace
}  // namespace svp
