#include "svp/solver.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "svp/error.hpp"
#include "svp/parallel.hpp"

namespace svp {

namespace {

struct Edge {
  size_t i;
  size_t j;
  double weight;
  Rotation relative;  // W_i^T W_j
};

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<size_t> parent_;
};

bool UseReverseTerm(const PairwiseScorer& scorer, Directionality d) {
  switch (d) {
    case Directionality::kDirectional: return true;
    case Directionality::kSymmetric: return false;
    case Directionality::kAuto: break;
  }
  return scorer.directional();
}

// Terms of the energy that depend on camera i when it takes rotation w.
double BlockObjective(const PairwiseScorer& scorer, std::span<const Rotation> rotations,
                      size_t i, const Rotation& w, bool reverse) {
  const Rotation w_inv = w.inverse();
  double total = 0.0;
  for (size_t j = 0; j < rotations.size(); ++j) {
    if (j == i) continue;
    total += scorer.Score(i, j, w_inv * rotations[j]);
    if (reverse) total += scorer.Score(j, i, rotations[j].inverse() * w);
  }
  return total;
}

}  // namespace

PairwiseBest BestPairwise(const PairwiseScorer& scorer, size_t i, size_t j,
                          const SO3Grid& grid, size_t workers) {
  const std::vector<double> scores = ScoreOverGrid(scorer, i, j, grid, workers);
  // max_element returns the first maximum, i.e. the lowest index.
  const auto best = std::max_element(scores.begin(), scores.end());
  const size_t index = static_cast<size_t>(best - scores.begin());
  return {grid[index], *best, index};
}

double TotalEnergy(const PairwiseScorer& scorer, std::span<const Rotation> rotations) {
  double total = 0.0;
  for (size_t i = 0; i < rotations.size(); ++i) {
    const Rotation w_inv = rotations[i].inverse();
    for (size_t j = 0; j < rotations.size(); ++j) {
      if (i == j) continue;
      total += scorer.Score(i, j, w_inv * rotations[j]);
    }
  }
  return total;
}

RotationHypothesis MstInit(const PairwiseScorer& scorer, size_t num_cameras,
                           const SO3Grid& grid, size_t workers) {
  SVP_CHECK_ARG(num_cameras >= 2, "at least two cameras are required");

  std::vector<Edge> edges;
  edges.reserve(num_cameras * (num_cameras - 1) / 2);
  for (size_t i = 0; i < num_cameras; ++i) {
    for (size_t j = i + 1; j < num_cameras; ++j) {
      const PairwiseBest forward = BestPairwise(scorer, i, j, grid, workers);
      const PairwiseBest backward = BestPairwise(scorer, j, i, grid, workers);
      if (backward.score > forward.score) {
        edges.push_back({i, j, backward.score, backward.rotation.inverse()});
      } else {
        edges.push_back({i, j, forward.score, forward.rotation});
      }
    }
  }
  // Heaviest first; equal weights keep (i, j) lexicographic order.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.weight > b.weight; });

  DisjointSets sets(num_cameras);
  std::vector<std::vector<std::pair<size_t, Rotation>>> adjacency(num_cameras);
  for (const Edge& e : edges) {
    if (!sets.Union(e.i, e.j)) continue;
    adjacency[e.i].emplace_back(e.j, e.relative);
    adjacency[e.j].emplace_back(e.i, e.relative.inverse());
  }
  for (auto& neighbours : adjacency) {
    std::sort(neighbours.begin(), neighbours.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  RotationHypothesis out;
  out.rotations.assign(num_cameras, Rotation::Identity());
  std::vector<bool> visited(num_cameras, false);
  std::vector<size_t> queue{0};
  visited[0] = true;
  for (size_t head = 0; head < queue.size(); ++head) {
    const size_t u = queue[head];
    for (const auto& [v, relative] : adjacency[u]) {
      if (visited[v]) continue;
      visited[v] = true;
      out.rotations[v] = out.rotations[u] * relative;
      queue.push_back(v);
    }
  }
  out.total_energy = TotalEnergy(scorer, out.rotations);
  return out;
}

RotationHypothesis SnapToGrid(const PairwiseScorer& scorer, const RotationHypothesis& hypothesis,
                              const SO3Grid& grid) {
  RotationHypothesis out = hypothesis;
  for (size_t i = 1; i < out.rotations.size(); ++i) {
    out.rotations[i] = grid[NearestInGrid(grid, out.rotations[i]).index];
  }
  out.total_energy = TotalEnergy(scorer, out.rotations);
  return out;
}

RotationHypothesis CoordinateAscent(const PairwiseScorer& scorer, const RotationHypothesis& init,
                                    const SO3Grid& grid, const SolverConfig& config) {
  SVP_CHECK_ARG(init.rotations.size() >= 2, "at least two cameras are required");
  SVP_CHECK_ARG(init.rotations[0] == Rotation::Identity(), "camera 0 must be the identity gauge");
  RotationHypothesis state = init;
  if (config.max_sweeps == 0) return state;

  const bool reverse = UseReverseTerm(scorer, config.directionality);
  const size_t patience = std::max<size_t>(1, config.patience);
  state.total_energy = TotalEnergy(scorer, state.rotations);
  state.sweeps_used = 0;

  std::vector<double> objective(grid.size());
  size_t quiet_sweeps = 0;
  while (state.sweeps_used < config.max_sweeps && quiet_sweeps < patience) {
    ++state.sweeps_used;
    bool changed = false;
    for (size_t i = 1; i < state.rotations.size(); ++i) {
      const std::span<const Rotation> rotations(state.rotations);
      ParallelFor(grid.size(), config.workers, [&](size_t begin, size_t end) {
        for (size_t k = begin; k < end; ++k) {
          objective[k] = BlockObjective(scorer, rotations, i, grid[k], reverse);
        }
      });
      const auto best = std::max_element(objective.begin(), objective.end());
      const double current = BlockObjective(scorer, rotations, i, state.rotations[i], reverse);
      if (!(*best > current)) continue;

      const Rotation previous = state.rotations[i];
      state.rotations[i] = grid[static_cast<size_t>(best - objective.begin())];
      const double energy = TotalEnergy(scorer, state.rotations);
      if (energy >= state.total_energy) {
        state.total_energy = energy;
        changed = true;
      } else {
        state.rotations[i] = previous;
      }
    }
    quiet_sweeps = changed ? 0 : quiet_sweeps + 1;
  }
  return state;
}

RotationHypothesis EscapeLocalOptima(const PairwiseScorer& scorer, const RotationHypothesis& state,
                                     const SO3Grid& grid, const SolverConfig& config) {
  RotationHypothesis best = state;
  if (config.escape_candidates == 0 || config.max_sweeps == 0) return best;
  const bool reverse = UseReverseTerm(scorer, config.directionality);
  const size_t keep = std::min(config.escape_candidates + 1, grid.size());

  std::vector<double> objective(grid.size());
  std::vector<size_t> order(grid.size());
  size_t adopted = 0;
  bool improved = true;
  while (improved && adopted < config.max_sweeps) {
    improved = false;
    for (size_t i = 1; i < best.rotations.size() && !improved; ++i) {
      const std::span<const Rotation> rotations(best.rotations);
      ParallelFor(grid.size(), config.workers, [&](size_t begin, size_t end) {
        for (size_t k = begin; k < end; ++k) {
          objective[k] = BlockObjective(scorer, rotations, i, grid[k], reverse);
        }
      });
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](size_t a, size_t b) {
        return objective[a] > objective[b] || (objective[a] == objective[b] && a < b);
      });
      size_t tried = 0;
      for (size_t t = 0; t < keep && tried < config.escape_candidates; ++t) {
        if (grid[order[t]] == best.rotations[i]) continue;
        ++tried;
        RotationHypothesis start = best;
        start.rotations[i] = grid[order[t]];
        RotationHypothesis result = CoordinateAscent(scorer, start, grid, config);
        if (result.total_energy > best.total_energy) {
          result.sweeps_used += best.sweeps_used;
          best = std::move(result);
          ++adopted;
          improved = true;
          break;
        }
      }
    }
  }
  return best;
}

RotationHypothesis Solve(const PairwiseScorer& scorer, size_t num_cameras, const SO3Grid& grid,
                         const SolverConfig& config) {
  const RotationHypothesis init = MstInit(scorer, num_cameras, grid, config.workers);
  const RotationHypothesis ascended =
      CoordinateAscent(scorer, SnapToGrid(scorer, init, grid), grid, config);
  return EscapeLocalOptima(scorer, ascended, grid, config);
}

SolverRunConfig ParseSolverConfig(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("solver config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kFormat, "solver config must be a JSON object");

  SolverRunConfig config;
  try {
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      if (g.contains("n")) config.grid.n = g.at("n").get<uint32_t>();
      if (g.contains("generator")) {
        config.grid.generator = ParseGridGenerator(g.at("generator").get<std::string>());
      }
      if (g.contains("seed")) config.grid.seed = g.at("seed").get<uint64_t>();
    }
    if (doc.contains("max_sweeps")) config.solver.max_sweeps = doc.at("max_sweeps").get<size_t>();
    if (doc.contains("patience")) config.solver.patience = doc.at("patience").get<size_t>();
    if (doc.contains("escape_candidates")) {
      config.solver.escape_candidates = doc.at("escape_candidates").get<size_t>();
    }
    if (doc.contains("directional")) {
      const json& d = doc.at("directional");
      if (d.is_boolean()) {
        config.solver.directionality =
            d.get<bool>() ? Directionality::kDirectional : Directionality::kSymmetric;
      } else if (d.is_string() && d.get<std::string>() == "auto") {
        config.solver.directionality = Directionality::kAuto;
      } else {
        throw Error(ErrorCode::kFormat, "directional must be true, false or \"auto\"");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad solver config: ") + e.what());
  }
  SVP_CHECK_ARG(config.grid.n >= 1, "grid n must be at least 1");
  return config;
}

std::string SolverConfigToJson(const SolverRunConfig& config) {
  nlohmann::ordered_json doc;
  doc["grid"]["n"] = config.grid.n;
  doc["grid"]["generator"] = ToString(config.grid.generator);
  doc["grid"]["seed"] = config.grid.seed;
  doc["max_sweeps"] = config.solver.max_sweeps;
  doc["patience"] = config.solver.patience;
  doc["escape_candidates"] = config.solver.escape_candidates;
  switch (config.solver.directionality) {
    case Directionality::kAuto: doc["directional"] = "auto"; break;
    case Directionality::kDirectional: doc["directional"] = true; break;
    case Directionality::kSymmetric: doc["directional"] = false; break;
  }
  return doc.dump(2);
}

}  // namespace svp
