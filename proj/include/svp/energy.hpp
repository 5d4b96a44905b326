#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "svp/so3.hpp"

namespace svp {

// Pairwise energy g(i, j, R): unnormalized log-likelihood that the relative
// rotation for the ordered camera pair (i, j) is R. Implementations must be
// deterministic and safe to call concurrently.
class PairwiseScorer {
 public:
  virtual ~PairwiseScorer() = default;

  virtual double Score(size_t i, size_t j, const Rotation& r) const = 0;

  // False when Score(i, j, R) == Score(j, i, R^T) is guaranteed, in which
  // case the solver skips the reverse term.
  virtual bool directional() const = 0;
};

class ConstantScorer final : public PairwiseScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  double Score(size_t, size_t, const Rotation&) const override { return value_; }
  bool directional() const override { return false; }

 private:
  double value_;
};

// Multi-modal synthetic energy: score = -kappa * min_m d(R, m)^2 over the
// modes registered for the pair. Maximum 0, attained exactly on a mode.
class SymmetricModeScorer final : public PairwiseScorer {
 public:
  SymmetricModeScorer(double kappa, bool directional);

  void SetModes(size_t i, size_t j, std::vector<Rotation> modes);
  const std::vector<Rotation>& modes(size_t i, size_t j) const;
  bool has_pair(size_t i, size_t j) const;
  double kappa() const { return kappa_; }

  // Throws kInvalidArgument for an unregistered pair.
  double Score(size_t i, size_t j, const Rotation& r) const override;
  bool directional() const override { return directional_; }

 private:
  double kappa_;
  bool directional_;
  std::map<std::pair<size_t, size_t>, std::vector<Rotation>> modes_;
};

// The k copies Rot(axis, 2*pi*l/k) * base, l = 0..k-1. `axis` is expressed in
// the frame the base rotation maps into.
std::vector<Rotation> SymmetryModes(const Rotation& base, const Vec3& axis, int k);

struct EnergyRow {
  uint16_t i = 0;
  uint16_t j = 0;
  std::vector<float> scores;

  bool operator==(const EnergyRow&) const = default;
};

// Scores over every grid rotation for a set of ordered pairs; the interop
// format for energies produced outside this library.
struct EnergyTable {
  GridSpec grid_spec;
  std::vector<EnergyRow> rows;

  bool operator==(const EnergyTable&) const = default;
};

// Table file: "RPET", u32 version, grid spec (u32 n, u8 generator, u64 seed),
// u32 pair count, then per pair u16 i, u16 j, n x float32; little-endian.
std::string SerializeTable(const EnergyTable& table);
EnergyTable DeserializeTable(const std::string& bytes);
void SaveTable(const EnergyTable& table, const std::string& path);
EnergyTable LoadTable(const std::string& path);

// Looks up the stored score of the grid rotation nearest to R. A pair stored
// in one direction only answers the reverse query with R^T.
class TabulatedScorer final : public PairwiseScorer {
 public:
  // `grid` must be built from table.grid_spec.
  TabulatedScorer(EnergyTable table, std::shared_ptr<const SO3Grid> grid);
  TabulatedScorer(const TabulatedScorer&) = delete;
  TabulatedScorer& operator=(const TabulatedScorer&) = delete;

  double Score(size_t i, size_t j, const Rotation& r) const override;
  bool directional() const override { return directional_; }

  size_t num_cameras() const { return num_cameras_; }
  const EnergyTable& table() const { return table_; }
  const SO3Grid& grid() const { return *grid_; }

 private:
  const EnergyRow* Row(size_t i, size_t j) const;

  EnergyTable table_;
  std::shared_ptr<const SO3Grid> grid_;
  size_t num_cameras_ = 0;
  bool directional_ = false;
  std::vector<const EnergyRow*> lookup_;
};

// Element k is scorer.Score(i, j, grid[k]); order is independent of `workers`
// (0 = hardware concurrency).
std::vector<double> ScoreOverGrid(const PairwiseScorer& scorer, size_t i, size_t j,
                                  const SO3Grid& grid, size_t workers = 1);

// Tabulates every ordered pair (i != j) of num_cameras, or only i < j when
// the scorer is not directional.
EnergyTable TabulateScorer(const PairwiseScorer& scorer, size_t num_cameras,
                           const SO3Grid& grid, size_t workers = 1);

// Discrete rotation NLL: -(s_gt - logsumexp(scores)), with s_gt the score at
// the grid point nearest to gt.
double NllOf(std::span<const double> scores, const Rotation& gt, const SO3Grid& grid);

double L1TranslationLoss(const Vec3& pred, const Vec3& target);

}  // namespace svp
