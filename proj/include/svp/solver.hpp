#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "svp/energy.hpp"
#include "svp/so3.hpp"

namespace svp {

// Global rotations recovered from pairwise energies. The solver works with
// camera-to-world rotations W_i (the transpose of the world-to-camera
// extrinsic rotation), so the pairwise argument W_i^T W_j equals R_i R_j^T in
// extrinsic terms and the energy is invariant to any change of world frame.
// rotations[0] is the gauge and is exactly the identity.
struct RotationHypothesis {
  std::vector<Rotation> rotations;
  double total_energy = 0.0;
  size_t sweeps_used = 0;
};

enum class Directionality {
  kAuto,         // use scorer.directional()
  kDirectional,  // always add the reverse term
  kSymmetric,    // never add the reverse term
};

struct SolverConfig {
  size_t max_sweeps = 50;
  // Consecutive sweeps without an accepted update before stopping. Sweeps are
  // deterministic, so any value above 1 only repeats the final no-op sweep.
  size_t patience = 1;
  Directionality directionality = Directionality::kAuto;
  // Threads for candidate evaluation; 0 = hardware concurrency. Results do
  // not depend on this value.
  size_t workers = 1;
  // Escape moves tried per camera once ascent stalls (see EscapeLocalOptima);
  // 0 gives plain MST + coordinate ascent.
  size_t escape_candidates = 8;
};

struct PairwiseBest {
  Rotation rotation;
  double score = 0.0;
  size_t index = 0;
};

// Grid argmax of scorer.Score(i, j, .); ties go to the lowest grid index.
PairwiseBest BestPairwise(const PairwiseScorer& scorer, size_t i, size_t j,
                          const SO3Grid& grid, size_t workers = 1);

// Sum over ordered pairs i != j (i, then j ascending) of
// Score(i, j, W_i^T W_j).
double TotalEnergy(const PairwiseScorer& scorer, std::span<const Rotation> rotations);

// Greedy initialisation: maximum spanning tree over the complete graph whose
// edge weight is the best pairwise score (max of the two directions), then
// relative rotations composed outward from camera 0. Equal weights are broken
// by (i, j) in lexicographic order.
RotationHypothesis MstInit(const PairwiseScorer& scorer, size_t num_cameras,
                           const SO3Grid& grid, size_t workers = 1);

// Replaces every non-gauge rotation with its nearest grid rotation.
RotationHypothesis SnapToGrid(const PairwiseScorer& scorer, const RotationHypothesis& hypothesis,
                              const SO3Grid& grid);

// Block coordinate ascent over cameras 1..N-1 in ascending order. Each block
// update moves W_i to the grid candidate maximising the terms of the energy
// that involve camera i, but only when that strictly beats the current value
// and the recomputed total energy does not decrease.
RotationHypothesis CoordinateAscent(const PairwiseScorer& scorer, const RotationHypothesis& init,
                                    const SO3Grid& grid, const SolverConfig& config);

// Single-camera moves stall in local optima on coarse grids. Starting from a
// converged hypothesis, forces camera i (ascending) onto each of its
// `escape_candidates` best block candidates in turn (descending block value,
// ties to the lower grid index), reruns CoordinateAscent, and adopts the result
// only if its total energy is strictly higher; after an adoption the scan
// restarts at camera 1. At most max_sweeps adoptions. sweeps_used accumulates
// the sweeps of adopted runs.
RotationHypothesis EscapeLocalOptima(const PairwiseScorer& scorer, const RotationHypothesis& state,
                                     const SO3Grid& grid, const SolverConfig& config);

// MstInit, projected onto the grid, then CoordinateAscent and
// EscapeLocalOptima.
RotationHypothesis Solve(const PairwiseScorer& scorer, size_t num_cameras, const SO3Grid& grid,
                         const SolverConfig& config);

// Solver section of a run config (JSON):
//   {"grid": {"n": 4608, "generator": "super_fibonacci", "seed": 0},
//    "max_sweeps": 50, "patience": 1, "directional": "auto"|true|false,
//    "escape_candidates": 8}
// Every key is optional.
struct SolverRunConfig {
  GridSpec grid{4608, GridGenerator::kSuperFibonacci, 0};
  SolverConfig solver;
};

SolverRunConfig ParseSolverConfig(const std::string& json_text);
std::string SolverConfigToJson(const SolverRunConfig& config);

}  // namespace svp
