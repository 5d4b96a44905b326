#include "svp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svp/error.hpp"
#include "svp/parallel.hpp"

namespace svp {

SymmetricModeScorer::SymmetricModeScorer(double kappa, bool directional)
    : kappa_(kappa), directional_(directional) {
  SVP_CHECK_ARG(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
}

void SymmetricModeScorer::SetModes(size_t i, size_t j, std::vector<Rotation> modes) {
  SVP_CHECK_ARG(i != j, "pair indices must differ");
  SVP_CHECK_ARG(!modes.empty(), "at least one mode is required");
  modes_[{i, j}] = std::move(modes);
}

bool SymmetricModeScorer::has_pair(size_t i, size_t j) const {
  return modes_.contains({i, j});
}

const std::vector<Rotation>& SymmetricModeScorer::modes(size_t i, size_t j) const {
  auto it = modes_.find({i, j});
  if (it == modes_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no modes for pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  return it->second;
}

double SymmetricModeScorer::Score(size_t i, size_t j, const Rotation& r) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Rotation& m : modes(i, j)) {
    best = std::min(best, GeodesicDistance(r, m));
  }
  return -kappa_ * best * best;
}

std::vector<Rotation> SymmetryModes(const Rotation& base, const Vec3& axis, int k) {
  SVP_CHECK_ARG(k >= 1, "symmetry order must be at least 1");
  std::vector<Rotation> modes;
  modes.reserve(k);
  modes.push_back(base);
  for (int l = 1; l < k; ++l) {
    modes.push_back(Rotation::FromAxisAngle(axis, 2.0 * std::numbers::pi * l / k) * base);
  }
  return modes;
}

TabulatedScorer::TabulatedScorer(EnergyTable table, std::shared_ptr<const SO3Grid> grid)
    : table_(std::move(table)), grid_(std::move(grid)) {
  SVP_CHECK_ARG(grid_ != nullptr, "tabulated scorer needs a grid");
  SVP_CHECK_ARG(grid_->spec() == table_.grid_spec, "grid does not match the table's grid spec");
  for (const EnergyRow& row : table_.rows) {
    SVP_CHECK_ARG(row.scores.size() == grid_->size(), "table row length differs from grid size");
    num_cameras_ = std::max<size_t>(num_cameras_, std::max(row.i, row.j) + size_t{1});
  }
  lookup_.assign(num_cameras_ * num_cameras_, nullptr);
  for (const EnergyRow& row : table_.rows) {
    lookup_[row.i * num_cameras_ + row.j] = &row;
  }
  for (const EnergyRow& row : table_.rows) {
    if (lookup_[row.j * num_cameras_ + row.i] != nullptr) directional_ = true;
  }
}

const EnergyRow* TabulatedScorer::Row(size_t i, size_t j) const {
  if (i >= num_cameras_ || j >= num_cameras_) return nullptr;
  return lookup_[i * num_cameras_ + j];
}

double TabulatedScorer::Score(size_t i, size_t j, const Rotation& r) const {
  if (const EnergyRow* row = Row(i, j)) {
    return row->scores[NearestIndex(*grid_, r.quaternion())];
  }
  if (const EnergyRow* row = Row(j, i)) {
    return row->scores[NearestIndex(*grid_, r.inverse().quaternion())];
  }
  throw Error(ErrorCode::kInvalidArgument,
              "energy table has no row for pair (" + std::to_string(i) + ", " +
                  std::to_string(j) + ")");
}

std::vector<double> ScoreOverGrid(const PairwiseScorer& scorer, size_t i, size_t j,
                                  const SO3Grid& grid, size_t workers) {
  SVP_CHECK_ARG(i != j, "score_over_grid requires i != j");
  std::vector<double> out(grid.size());
  ParallelFor(grid.size(), workers, [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) out[k] = scorer.Score(i, j, grid[k]);
  });
  return out;
}

EnergyTable TabulateScorer(const PairwiseScorer& scorer, size_t num_cameras,
                           const SO3Grid& grid, size_t workers) {
  SVP_CHECK_ARG(num_cameras <= 65536, "too many cameras for the table format");
  EnergyTable table;
  table.grid_spec = grid.spec();
  for (size_t i = 0; i < num_cameras; ++i) {
    for (size_t j = 0; j < num_cameras; ++j) {
      if (i == j || (!scorer.directional() && j < i)) continue;
      const std::vector<double> scores = ScoreOverGrid(scorer, i, j, grid, workers);
      EnergyRow row;
      row.i = static_cast<uint16_t>(i);
      row.j = static_cast<uint16_t>(j);
      row.scores.assign(scores.begin(), scores.end());
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

double NllOf(std::span<const double> scores, const Rotation& gt, const SO3Grid& grid) {
  SVP_CHECK_ARG(!scores.empty() && grid.size() > 0, "nll_of needs a non-empty grid");
  SVP_CHECK_ARG(scores.size() == grid.size(), "score array length differs from grid size");
  const double max_score = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max_score);
  const double log_z = max_score + std::log(sum);
  const double s_gt = scores[NearestInGrid(grid, gt).index];
  return log_z - s_gt;
}

double L1TranslationLoss(const Vec3& pred, const Vec3& target) {
  return (pred - target).cwiseAbs().sum();
}

}  // namespace svp
