#include "svp/svp.h"

#include <cmath>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "binary_io.hpp"
#include "svp/energy.hpp"
#include "svp/error.hpp"
#include "svp/eval.hpp"
#include "svp/frame.hpp"
#include "svp/random.hpp"
#include "svp/report.hpp"
#include "svp/scene_io.hpp"
#include "svp/so3.hpp"
#include "svp/solver.hpp"
#include "svp/synth.hpp"

struct svp_grid {
  std::shared_ptr<const svp::SO3Grid> grid;
};

struct svp_scene {
  svp::PoseFile file;
};

struct svp_scorer {
  std::unique_ptr<svp::PairwiseScorer> scorer;
};

struct svp_table {
  svp::EnergyTable table;
};

struct svp_report_set {
  std::vector<svp::SceneReport> reports;
  // Parallel to reports; empty errors for rows added without an evaluation.
  std::vector<svp::SceneErrors> errors;
  std::vector<bool> has_errors;
};

namespace {

thread_local std::string g_last_error;

svp_status StatusOf(svp::ErrorCode code) {
  using svp::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return SVP_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDegenerateGeometry: return SVP_ERR_DEGENERATE_GEOMETRY;
    case ErrorCode::kDegenerateScale: return SVP_ERR_DEGENERATE_SCALE;
    case ErrorCode::kDegenerateAlignment: return SVP_ERR_DEGENERATE_ALIGNMENT;
    case ErrorCode::kOrientationFlip: return SVP_ERR_ORIENTATION_FLIP;
    case ErrorCode::kFormat: return SVP_ERR_FORMAT;
    case ErrorCode::kCorruptTable: return SVP_ERR_CORRUPT_TABLE;
    case ErrorCode::kIo: return SVP_ERR_IO;
    case ErrorCode::kConsistency: return SVP_ERR_CONSISTENCY;
  }
  return SVP_ERR_INTERNAL;
}

template <typename Fn>
svp_status Guard(Fn&& fn) {
  try {
    fn();
    return SVP_OK;
  } catch (const svp::Error& e) {
    g_last_error = e.what();
    return StatusOf(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SVP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SVP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SVP_ERR_INTERNAL;
  }
}

void Require(bool cond, const char* what) {
  if (!cond) throw svp::Error(svp::ErrorCode::kInvalidArgument, what);
}

svp::Rotation RotationIn(const double* m) {
  Require(m != nullptr, "null rotation");
  svp::Mat3 r;
  r << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
  return svp::Rotation::FromMatrix(r);
}

void RotationOut(const svp::Rotation& r, double* out) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) out[3 * a + b] = r.matrix()(a, b);
  }
}

void VecOut(const svp::Vec3& v, double* out) {
  out[0] = v.x();
  out[1] = v.y();
  out[2] = v.z();
}

std::vector<svp::CameraPose> PosesIn(size_t n, const double* rotations, const double* translations) {
  Require(n == 0 || (rotations != nullptr && translations != nullptr), "null pose array");
  std::vector<svp::CameraPose> poses(n);
  for (size_t i = 0; i < n; ++i) {
    poses[i].rotation = RotationIn(rotations + 9 * i);
    poses[i].translation = svp::Vec3(translations[3 * i], translations[3 * i + 1],
                                     translations[3 * i + 2]);
  }
  return poses;
}

std::vector<svp::Vec3> PointsIn(size_t n, const double* xyz) {
  Require(n == 0 || xyz != nullptr, "null point array");
  std::vector<svp::Vec3> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = svp::Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
  return out;
}

void ReportOut(const svp::EvalReport& r, svp_eval_report* out) {
  out->num_cameras = r.num_cameras;
  for (size_t k = 0; k < 4; ++k) out->rotation_accuracy[k] = r.rotation_accuracy[k];
  for (size_t k = 0; k < 3; ++k) out->camera_center_accuracy[k] = r.camera_center_accuracy[k];
  out->translation_accuracy = r.translation_accuracy;
  out->rotation_auc = r.rotation_auc;
  out->center_auc = r.center_auc;
  out->sigma = r.sigma;
}

svp::EvalReport ReportIn(const svp_eval_report& in) {
  svp::EvalReport r;
  r.num_cameras = in.num_cameras;
  for (size_t k = 0; k < 4; ++k) r.rotation_accuracy[k] = in.rotation_accuracy[k];
  for (size_t k = 0; k < 3; ++k) r.camera_center_accuracy[k] = in.camera_center_accuracy[k];
  r.translation_accuracy = in.translation_accuracy;
  r.rotation_auc = in.rotation_auc;
  r.center_auc = in.center_auc;
  r.sigma = in.sigma;
  return r;
}

svp::SolverConfig SolverConfigIn(const svp_solver_config* c) {
  svp::SolverConfig config;
  if (c == nullptr) return config;
  config.max_sweeps = c->max_sweeps;
  config.patience = c->patience;
  config.workers = c->workers;
  config.escape_candidates = c->escape_candidates;
  if (c->directional < 0) {
    config.directionality = svp::Directionality::kAuto;
  } else {
    config.directionality =
        c->directional ? svp::Directionality::kDirectional : svp::Directionality::kSymmetric;
  }
  return config;
}

void SolverConfigOut(const svp::SolverConfig& config, svp_solver_config* out) {
  out->max_sweeps = config.max_sweeps;
  out->patience = config.patience;
  out->workers = config.workers;
  out->escape_candidates = config.escape_candidates;
  switch (config.directionality) {
    case svp::Directionality::kAuto: out->directional = -1; break;
    case svp::Directionality::kDirectional: out->directional = 1; break;
    case svp::Directionality::kSymmetric: out->directional = 0; break;
  }
}

double SceneSigma(const svp_scene* scene) {
  if (scene->file.sigma) return *scene->file.sigma;
  return svp::SceneScale(scene->file.poses);
}

}  // namespace

extern "C" {

const char* svp_version(void) { return "0.1.0"; }

const char* svp_status_name(svp_status status) {
  switch (status) {
    case SVP_OK: return "ok";
    case SVP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SVP_ERR_DEGENERATE_GEOMETRY: return "degenerate-geometry";
    case SVP_ERR_DEGENERATE_SCALE: return "degenerate-scale";
    case SVP_ERR_DEGENERATE_ALIGNMENT: return "degenerate-alignment";
    case SVP_ERR_ORIENTATION_FLIP: return "orientation-flip";
    case SVP_ERR_FORMAT: return "format";
    case SVP_ERR_CORRUPT_TABLE: return "corrupt-table";
    case SVP_ERR_IO: return "io";
    case SVP_ERR_CONSISTENCY: return "consistency";
    case SVP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* svp_last_error(void) { return g_last_error.c_str(); }

uint64_t svp_derive_seed(uint64_t base, uint64_t stream) { return svp::DeriveSeed(base, stream); }

// ---- grids

const char* svp_grid_generator_name(svp_grid_generator generator) {
  return svp::ToString(static_cast<svp::GridGenerator>(generator));
}

svp_status svp_grid_generator_parse(const char* name, svp_grid_generator* out) {
  return Guard([&] {
    Require(name != nullptr && out != nullptr, "null argument");
    *out = static_cast<svp_grid_generator>(svp::ParseGridGenerator(name));
  });
}

svp_status svp_grid_build(uint32_t n, svp_grid_generator generator, uint64_t seed,
                          svp_grid** out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    Require(generator == SVP_GRID_SUPER_FIBONACCI || generator == SVP_GRID_RANDOM_UNIFORM,
            "unknown grid generator");
    const svp::GridSpec spec{n, static_cast<svp::GridGenerator>(generator), seed};
    auto grid = std::make_shared<const svp::SO3Grid>(svp::SO3Grid::Build(spec));
    *out = new svp_grid{std::move(grid)};
  });
}

svp_status svp_grid_load(const char* path, svp_grid** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto grid = std::make_shared<const svp::SO3Grid>(svp::LoadGrid(path));
    *out = new svp_grid{std::move(grid)};
  });
}

svp_status svp_grid_save(const svp_grid* grid, const char* path) {
  return Guard([&] {
    Require(grid != nullptr && path != nullptr, "null argument");
    svp::SaveGrid(*grid->grid, path);
  });
}

void svp_grid_free(svp_grid* grid) { delete grid; }

size_t svp_grid_size(const svp_grid* grid) { return grid ? grid->grid->size() : 0; }

double svp_grid_covering_radius(const svp_grid* grid) {
  return grid ? grid->grid->covering_radius() : 0.0;
}

svp_status svp_grid_spec(const svp_grid* grid, uint32_t* n, svp_grid_generator* generator,
                         uint64_t* seed) {
  return Guard([&] {
    Require(grid != nullptr, "null grid");
    const svp::GridSpec& spec = grid->grid->spec();
    if (n) *n = spec.n;
    if (generator) *generator = static_cast<svp_grid_generator>(spec.generator);
    if (seed) *seed = spec.seed;
  });
}

svp_status svp_grid_rotation(const svp_grid* grid, size_t k, double rotation[9]) {
  return Guard([&] {
    Require(grid != nullptr && rotation != nullptr, "null argument");
    Require(k < grid->grid->size(), "grid index out of range");
    RotationOut((*grid->grid)[k], rotation);
  });
}

svp_status svp_grid_nearest(const svp_grid* grid, const double rotation[9], size_t* index,
                            double* distance) {
  return Guard([&] {
    Require(grid != nullptr, "null grid");
    const svp::NearestResult r = svp::NearestInGrid(*grid->grid, RotationIn(rotation));
    if (index) *index = r.index;
    if (distance) *distance = r.distance;
  });
}

svp_status svp_geodesic_distance(const double a[9], const double b[9], double* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = svp::GeodesicDistance(RotationIn(a), RotationIn(b));
  });
}

// ---- scenes

svp_status svp_scene_generate(const svp_rig_spec* spec, const char* id, svp_scene** out) {
  return Guard([&] {
    Require(spec != nullptr && id != nullptr && out != nullptr, "null argument");
    svp::RigSpec rig;
    rig.num_cameras = spec->num_cameras;
    rig.radius_min = spec->radius_min;
    rig.radius_max = spec->radius_max;
    rig.jitter = spec->jitter;
    rig.lookat = svp::Vec3(spec->lookat[0], spec->lookat[1], spec->lookat[2]);
    rig.seed = spec->seed;
    *out = new svp_scene{svp::SceneToPoseFile(id, svp::GenerateScene(rig))};
  });
}

svp_status svp_scene_create(const char* id, size_t n, const double* rotations,
                            const double* translations, svp_scene** out) {
  return Guard([&] {
    Require(id != nullptr && out != nullptr, "null argument");
    svp::PoseFile file;
    file.id = id;
    file.poses = PosesIn(n, rotations, translations);
    *out = new svp_scene{std::move(file)};
  });
}

svp_status svp_scene_load(const char* path, svp_scene** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new svp_scene{svp::LoadPoseFile(path)};
  });
}

svp_status svp_scene_save(const svp_scene* scene, const char* path) {
  return Guard([&] {
    Require(scene != nullptr && path != nullptr, "null argument");
    svp::SavePoseFile(scene->file, path);
  });
}

void svp_scene_free(svp_scene* scene) { delete scene; }

const char* svp_scene_id(const svp_scene* scene) { return scene ? scene->file.id.c_str() : ""; }

size_t svp_scene_num_cameras(const svp_scene* scene) {
  return scene ? scene->file.poses.size() : 0;
}

svp_status svp_scene_sigma(const svp_scene* scene, double* sigma) {
  return Guard([&] {
    Require(scene != nullptr && sigma != nullptr, "null argument");
    *sigma = SceneSigma(scene);
  });
}

svp_status svp_scene_pose(const svp_scene* scene, size_t i, double rotation[9],
                          double translation[3]) {
  return Guard([&] {
    Require(scene != nullptr, "null scene");
    Require(i < scene->file.poses.size(), "camera index out of range");
    const svp::CameraPose& p = scene->file.poses[i];
    if (rotation) RotationOut(p.rotation, rotation);
    if (translation) VecOut(p.translation, translation);
  });
}

svp_status svp_scene_set_solver_info(svp_scene* scene, double energy, size_t sweeps,
                                     const char* translation_source) {
  return Guard([&] {
    Require(scene != nullptr && translation_source != nullptr, "null argument");
    scene->file.solver = svp::SolveDiagnostics{energy, sweeps, translation_source};
  });
}

// ---- scorers and tables

void svp_scorer_options_default(svp_scorer_options* options) {
  if (!options) return;
  const svp::ScorerSpec spec;
  options->kappa = spec.kappa;
  options->noise_angle = spec.noise_angle;
  options->seed = spec.seed;
  options->symmetries = nullptr;
  options->num_symmetries = 0;
}

svp_status svp_scorer_from_scene(const svp_scene* scene, const svp_scorer_options* options,
                                 svp_scorer** out) {
  return Guard([&] {
    Require(scene != nullptr && options != nullptr && out != nullptr, "null argument");
    Require(options->num_symmetries == 0 || options->symmetries != nullptr, "null symmetry list");
    svp::ScorerSpec spec;
    spec.kappa = options->kappa;
    spec.noise_angle = options->noise_angle;
    spec.seed = options->seed;
    for (size_t s = 0; s < options->num_symmetries; ++s) {
      const svp_pair_symmetry& sym = options->symmetries[s];
      spec.symmetries.push_back(
          {sym.i, sym.j, svp::Vec3(sym.axis[0], sym.axis[1], sym.axis[2]), sym.k});
    }
    *out = new svp_scorer{svp::SceneToScorer(scene->file.poses, spec)};
  });
}

svp_status svp_scorer_constant(double value, svp_scorer** out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = new svp_scorer{std::make_unique<svp::ConstantScorer>(value)};
  });
}

svp_status svp_scorer_from_table(const svp_table* table, const svp_grid* grid,
                                 svp_scorer** out) {
  return Guard([&] {
    Require(table != nullptr && grid != nullptr && out != nullptr, "null argument");
    if (!(grid->grid->spec() == table->table.grid_spec)) {
      throw svp::Error(svp::ErrorCode::kConsistency,
                       "grid does not match the grid the table was tabulated on");
    }
    *out = new svp_scorer{std::make_unique<svp::TabulatedScorer>(table->table, grid->grid)};
  });
}

void svp_scorer_free(svp_scorer* scorer) { delete scorer; }

int svp_scorer_directional(const svp_scorer* scorer) {
  return scorer && scorer->scorer->directional() ? 1 : 0;
}

svp_status svp_scorer_score(const svp_scorer* scorer, size_t i, size_t j, const double rotation[9],
                            double* out) {
  return Guard([&] {
    Require(scorer != nullptr && out != nullptr, "null argument");
    *out = scorer->scorer->Score(i, j, RotationIn(rotation));
  });
}

svp_status svp_score_over_grid(const svp_scorer* scorer, size_t i, size_t j, const svp_grid* grid,
                               size_t workers, double* out) {
  return Guard([&] {
    Require(scorer != nullptr && grid != nullptr && out != nullptr, "null argument");
    const std::vector<double> scores =
        svp::ScoreOverGrid(*scorer->scorer, i, j, *grid->grid, workers);
    std::copy(scores.begin(), scores.end(), out);
  });
}

svp_status svp_nll(const double* scores, size_t n, const double gt_rotation[9],
                   const svp_grid* grid, double* out) {
  return Guard([&] {
    Require(scores != nullptr && grid != nullptr && out != nullptr, "null argument");
    *out = svp::NllOf(std::span<const double>(scores, n), RotationIn(gt_rotation), *grid->grid);
  });
}

double svp_l1_translation_loss(const double pred[3], const double target[3]) {
  return svp::L1TranslationLoss(svp::Vec3(pred[0], pred[1], pred[2]),
                                svp::Vec3(target[0], target[1], target[2]));
}

svp_status svp_table_tabulate(const svp_scorer* scorer, size_t num_cameras, const svp_grid* grid,
                              size_t workers, svp_table** out) {
  return Guard([&] {
    Require(scorer != nullptr && grid != nullptr && out != nullptr, "null argument");
    *out = new svp_table{svp::TabulateScorer(*scorer->scorer, num_cameras, *grid->grid, workers)};
  });
}

svp_status svp_table_load(const char* path, svp_table** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new svp_table{svp::LoadTable(path)};
  });
}

svp_status svp_table_save(const svp_table* table, const char* path) {
  return Guard([&] {
    Require(table != nullptr && path != nullptr, "null argument");
    svp::SaveTable(table->table, path);
  });
}

void svp_table_free(svp_table* table) { delete table; }

size_t svp_table_num_pairs(const svp_table* table) { return table ? table->table.rows.size() : 0; }

svp_status svp_table_grid_spec(const svp_table* table, uint32_t* n, svp_grid_generator* generator,
                               uint64_t* seed) {
  return Guard([&] {
    Require(table != nullptr, "null table");
    const svp::GridSpec& spec = table->table.grid_spec;
    if (n) *n = spec.n;
    if (generator) *generator = static_cast<svp_grid_generator>(spec.generator);
    if (seed) *seed = spec.seed;
  });
}

size_t svp_table_num_cameras(const svp_table* table) {
  if (!table) return 0;
  size_t n = 0;
  for (const svp::EnergyRow& row : table->table.rows) {
    n = std::max<size_t>(n, std::max<size_t>(row.i, row.j) + 1);
  }
  return n;
}

// ---- solver

void svp_solver_config_default(svp_solver_config* config) {
  if (config) SolverConfigOut(svp::SolverConfig{}, config);
}

void svp_solver_run_config_default(svp_solver_run_config* config) {
  if (!config) return;
  const svp::SolverRunConfig defaults;
  config->grid_n = defaults.grid.n;
  config->grid_generator = static_cast<svp_grid_generator>(defaults.grid.generator);
  config->grid_seed = defaults.grid.seed;
  SolverConfigOut(defaults.solver, &config->solver);
}

svp_status svp_solver_run_config_load(const char* path, svp_solver_run_config* out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    const svp::SolverRunConfig config = svp::ParseSolverConfig(svp::detail::ReadFile(path));
    out->grid_n = config.grid.n;
    out->grid_generator = static_cast<svp_grid_generator>(config.grid.generator);
    out->grid_seed = config.grid.seed;
    SolverConfigOut(config.solver, &out->solver);
  });
}

svp_status svp_solve(const svp_scorer* scorer, size_t num_cameras, const svp_grid* grid,
                     const svp_solver_config* config, double* rotations, double* total_energy,
                     size_t* sweeps_used) {
  return Guard([&] {
    Require(scorer != nullptr && grid != nullptr && rotations != nullptr, "null argument");
    const svp::RotationHypothesis h =
        svp::Solve(*scorer->scorer, num_cameras, *grid->grid, SolverConfigIn(config));
    // Solver rotations are camera-to-world; callers get extrinsics.
    for (size_t i = 0; i < h.rotations.size(); ++i) {
      RotationOut(h.rotations[i].inverse(), rotations + 9 * i);
    }
    if (total_energy) *total_energy = h.total_energy;
    if (sweeps_used) *sweeps_used = h.sweeps_used;
  });
}

// ---- frame

svp_status svp_closest_point_to_axes(size_t n, const double* rotations, const double* translations,
                                     double out[3]) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    VecOut(svp::ClosestPointToAxes(PosesIn(n, rotations, translations)), out);
  });
}

svp_status svp_normalize_scene(size_t n, const double* rotations, const double* translations,
                               double lookat[3], double* scale, double* targets) {
  return Guard([&] {
    const svp::SceneFrame frame = svp::NormalizeScene(PosesIn(n, rotations, translations));
    if (lookat) VecOut(frame.lookat, lookat);
    if (scale) *scale = frame.scale;
    if (targets) {
      for (size_t i = 0; i < frame.targets.size(); ++i) VecOut(frame.targets[i], targets + 3 * i);
    }
  });
}

svp_status svp_first_camera_frame_targets(size_t n, const double* rotations,
                                          const double* translations, double* targets) {
  return Guard([&] {
    Require(targets != nullptr, "null output");
    const std::vector<svp::Vec3> t =
        svp::FirstCameraFrameTargets(PosesIn(n, rotations, translations));
    for (size_t i = 0; i < t.size(); ++i) VecOut(t[i], targets + 3 * i);
  });
}

// ---- evaluation

svp_status svp_umeyama_align(size_t n, const double* source, const double* target, double* scale,
                             double rotation[9], double translation[3]) {
  return Guard([&] {
    const svp::SimilarityTransform s = svp::UmeyamaAlign(PointsIn(n, source), PointsIn(n, target));
    if (scale) *scale = s.scale;
    if (rotation) RotationOut(s.rotation, rotation);
    if (translation) VecOut(s.translation, translation);
  });
}

svp_status svp_translation_align(size_t n, const double* pred_rotations,
                                 const double* pred_translations, const double* gt_rotations,
                                 const double* gt_translations, double* scale, double offset[3]) {
  return Guard([&] {
    const svp::TranslationAlignment a =
        svp::TranslationAlign(PosesIn(n, pred_rotations, pred_translations),
                              PosesIn(n, gt_rotations, gt_translations));
    if (scale) *scale = a.scale;
    if (offset) VecOut(a.offset, offset);
  });
}

svp_status svp_accuracy_curve_auc(const double* errors, size_t n, double max_threshold,
                                  double* out) {
  return Guard([&] {
    Require((errors != nullptr || n == 0) && out != nullptr, "null argument");
    *out = svp::AccuracyCurveAuc(std::span<const double>(errors, n), max_threshold);
  });
}

svp_status svp_evaluate(const svp_scene* pred, const svp_scene* gt, double sigma,
                        svp_eval_report* out) {
  return Guard([&] {
    Require(pred != nullptr && gt != nullptr && out != nullptr, "null argument");
    ReportOut(svp::Evaluate(pred->file.poses, gt->file.poses, sigma), out);
  });
}

svp_status svp_report_set_create(svp_report_set** out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = new svp_report_set{};
  });
}

void svp_report_set_free(svp_report_set* set) { delete set; }

svp_status svp_report_set_add_evaluation(svp_report_set* set, const svp_scene* pred,
                                         const svp_scene* gt, double sigma) {
  return Guard([&] {
    Require(set != nullptr && pred != nullptr && gt != nullptr, "null argument");
    svp::SceneErrors errors{gt->file.id, svp::ComputeErrors(pred->file.poses, gt->file.poses),
                            sigma};
    svp::EvalReport report =
        svp::ReportFromErrors(errors.errors, gt->file.poses.size(), sigma);
    set->reports.push_back({gt->file.id, report});
    set->errors.push_back(std::move(errors));
    set->has_errors.push_back(true);
  });
}

svp_status svp_report_set_add(svp_report_set* set, const char* id, const svp_eval_report* report) {
  return Guard([&] {
    Require(set != nullptr && id != nullptr && report != nullptr, "null argument");
    set->reports.push_back({id, ReportIn(*report)});
    set->errors.push_back({id, {}, report->sigma});
    set->has_errors.push_back(false);
  });
}

svp_status svp_report_set_load_csv(svp_report_set* set, const char* path) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    for (svp::SceneReport& r : svp::ParseReportCsv(svp::detail::ReadFile(path))) {
      set->errors.push_back({r.id, {}, r.report.sigma});
      set->has_errors.push_back(false);
      set->reports.push_back(std::move(r));
    }
  });
}

size_t svp_report_set_size(const svp_report_set* set) { return set ? set->reports.size() : 0; }

svp_status svp_report_set_get(const svp_report_set* set, size_t k, svp_eval_report* out) {
  return Guard([&] {
    Require(set != nullptr && out != nullptr, "null argument");
    Require(k < set->reports.size(), "report index out of range");
    ReportOut(set->reports[k].report, out);
  });
}

svp_status svp_report_set_mean(const svp_report_set* set, svp_eval_report* out) {
  return Guard([&] {
    Require(set != nullptr && out != nullptr, "null argument");
    ReportOut(svp::MeanReport(set->reports), out);
  });
}

svp_status svp_report_set_write_csv(const svp_report_set* set, const char* path,
                                    int with_mean_row) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    svp::detail::WriteFileAtomic(path, svp::ReportsToCsv(set->reports, with_mean_row != 0));
  });
}

svp_status svp_report_set_write_json(const svp_report_set* set, const char* path) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    svp::detail::WriteFileAtomic(path, svp::ReportsToJson(set->reports));
  });
}

svp_status svp_report_set_write_sweep(const svp_report_set* set, const char* path) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    for (bool has : set->has_errors) {
      Require(has, "sweep needs raw errors; add reports through an evaluation");
    }
    svp::detail::WriteFileAtomic(path, svp::SweepCsv(set->errors));
  });
}

}  // extern "C"
