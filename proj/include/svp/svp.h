/*
 * libsvp: sparse-view camera pose recovery from pairwise rotation energies.
 *
 * C interface over the C++ core. Every object is an opaque handle released
 * with its *_free function; every fallible call returns an svp_status and
 * leaves a human-readable message in svp_last_error() (per thread).
 *
 * Conventions shared by all calls:
 *   - rotations are row-major 3x3 (9 doubles), world-to-camera:
 *     x_cam = R x_world + t;
 *   - pose arrays hold n rotations (9n doubles) and n translations (3n);
 *   - camera indices are 0-based; camera 0 is the solver's gauge.
 */
#ifndef SVP_SVP_H_
#define SVP_SVP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SVP_BUILDING_LIBRARY)
#    define SVP_API __declspec(dllexport)
#  else
#    define SVP_API __declspec(dllimport)
#  endif
#else
#  define SVP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum svp_status {
  SVP_OK = 0,
  SVP_ERR_INVALID_ARGUMENT = 1,
  SVP_ERR_DEGENERATE_GEOMETRY = 2,
  SVP_ERR_DEGENERATE_SCALE = 3,
  SVP_ERR_DEGENERATE_ALIGNMENT = 4,
  SVP_ERR_ORIENTATION_FLIP = 5,
  SVP_ERR_FORMAT = 6,
  SVP_ERR_CORRUPT_TABLE = 7,
  SVP_ERR_IO = 8,
  SVP_ERR_CONSISTENCY = 9,
  SVP_ERR_INTERNAL = 10
} svp_status;

SVP_API const char* svp_version(void);
/* Stable kebab-case name, e.g. "corrupt-table". */
SVP_API const char* svp_status_name(svp_status status);
/* Message of the last failed call on this thread ("" if none). */
SVP_API const char* svp_last_error(void);

/* Independent stream seed from a base seed and a stream index. */
SVP_API uint64_t svp_derive_seed(uint64_t base, uint64_t stream);

/* ---- SO(3) grids ------------------------------------------------------ */

typedef struct svp_grid svp_grid;

typedef enum svp_grid_generator {
  SVP_GRID_SUPER_FIBONACCI = 0,
  SVP_GRID_RANDOM_UNIFORM = 1
} svp_grid_generator;

/* "super_fibonacci" | "random_uniform" */
SVP_API const char* svp_grid_generator_name(svp_grid_generator generator);
SVP_API svp_status svp_grid_generator_parse(const char* name, svp_grid_generator* out);

SVP_API svp_status svp_grid_build(uint32_t n, svp_grid_generator generator, uint64_t seed,
                                  svp_grid** out);
SVP_API svp_status svp_grid_load(const char* path, svp_grid** out);
SVP_API svp_status svp_grid_save(const svp_grid* grid, const char* path);
SVP_API void svp_grid_free(svp_grid* grid);
SVP_API size_t svp_grid_size(const svp_grid* grid);
SVP_API double svp_grid_covering_radius(const svp_grid* grid);
SVP_API svp_status svp_grid_spec(const svp_grid* grid, uint32_t* n,
                                 svp_grid_generator* generator, uint64_t* seed);
SVP_API svp_status svp_grid_rotation(const svp_grid* grid, size_t k, double rotation[9]);
SVP_API svp_status svp_grid_nearest(const svp_grid* grid, const double rotation[9],
                                    size_t* index, double* distance);

SVP_API svp_status svp_geodesic_distance(const double a[9], const double b[9], double* out);

/* ---- scenes and pose files -------------------------------------------- */

/* A scene holds an id and n camera poses, plus optional rig spec, scene
 * scale and solver diagnostics. Predictions use the same handle. */
typedef struct svp_scene svp_scene;

typedef struct svp_rig_spec {
  size_t num_cameras;
  double radius_min;
  double radius_max;
  double jitter; /* radians, [0, pi/4] */
  double lookat[3];
  uint64_t seed;
} svp_rig_spec;

SVP_API svp_status svp_scene_generate(const svp_rig_spec* spec, const char* id, svp_scene** out);
SVP_API svp_status svp_scene_create(const char* id, size_t n, const double* rotations,
                                    const double* translations, svp_scene** out);
SVP_API svp_status svp_scene_load(const char* path, svp_scene** out);
/* Written atomically (temp file + rename). */
SVP_API svp_status svp_scene_save(const svp_scene* scene, const char* path);
SVP_API void svp_scene_free(svp_scene* scene);
SVP_API const char* svp_scene_id(const svp_scene* scene);
SVP_API size_t svp_scene_num_cameras(const svp_scene* scene);
/* Stored scene scale, or the one computed from the poses when absent. */
SVP_API svp_status svp_scene_sigma(const svp_scene* scene, double* sigma);
SVP_API svp_status svp_scene_pose(const svp_scene* scene, size_t i, double rotation[9],
                                  double translation[3]);
SVP_API svp_status svp_scene_set_solver_info(svp_scene* scene, double energy, size_t sweeps,
                                             const char* translation_source);

/* ---- pairwise energies ------------------------------------------------ */

typedef struct svp_scorer svp_scorer;
typedef struct svp_table svp_table;

typedef struct svp_pair_symmetry {
  size_t i;
  size_t j;
  double axis[3]; /* world frame */
  int k;          /* k-fold symmetry, >= 1 */
} svp_pair_symmetry;

typedef struct svp_scorer_options {
  double kappa;       /* 1 / rad^2, > 0 */
  double noise_angle; /* radians, >= 0 */
  uint64_t seed;
  const svp_pair_symmetry* symmetries;
  size_t num_symmetries;
} svp_scorer_options;

SVP_API void svp_scorer_options_default(svp_scorer_options* options);
/* Synthetic multi-modal energies around the scene's true relative rotations. */
SVP_API svp_status svp_scorer_from_scene(const svp_scene* scene, const svp_scorer_options* options,
                                         svp_scorer** out);
SVP_API svp_status svp_scorer_constant(double value, svp_scorer** out);
/* grid must match the table's grid spec (SVP_ERR_CONSISTENCY otherwise); the
 * scorer keeps its own reference, so the grid may be freed first. */
SVP_API svp_status svp_scorer_from_table(const svp_table* table, const svp_grid* grid,
                                         svp_scorer** out);
SVP_API void svp_scorer_free(svp_scorer* scorer);
SVP_API int svp_scorer_directional(const svp_scorer* scorer);
SVP_API svp_status svp_scorer_score(const svp_scorer* scorer, size_t i, size_t j,
                                    const double rotation[9], double* out);
/* out must hold svp_grid_size(grid) doubles. workers = 0: all cores. */
SVP_API svp_status svp_score_over_grid(const svp_scorer* scorer, size_t i, size_t j,
                                       const svp_grid* grid, size_t workers, double* out);
SVP_API svp_status svp_nll(const double* scores, size_t n, const double gt_rotation[9],
                           const svp_grid* grid, double* out);
SVP_API double svp_l1_translation_loss(const double pred[3], const double target[3]);

SVP_API svp_status svp_table_tabulate(const svp_scorer* scorer, size_t num_cameras,
                                      const svp_grid* grid, size_t workers, svp_table** out);
SVP_API svp_status svp_table_load(const char* path, svp_table** out);
SVP_API svp_status svp_table_save(const svp_table* table, const char* path);
SVP_API void svp_table_free(svp_table* table);
SVP_API size_t svp_table_num_pairs(const svp_table* table);
SVP_API svp_status svp_table_grid_spec(const svp_table* table, uint32_t* n,
                                       svp_grid_generator* generator, uint64_t* seed);
/* 1 + the largest camera index referenced by the table. */
SVP_API size_t svp_table_num_cameras(const svp_table* table);

/* ---- solver ----------------------------------------------------------- */

typedef struct svp_solver_config {
  size_t max_sweeps;
  size_t patience;
  int directional; /* -1 auto, 0 never add the reverse term, 1 always */
  size_t workers;  /* 0 = all cores; results do not depend on it */
  size_t escape_candidates; /* per-camera escape moves after ascent; 0 = off */
} svp_solver_config;

typedef struct svp_solver_run_config {
  uint32_t grid_n;
  svp_grid_generator grid_generator;
  uint64_t grid_seed;
  svp_solver_config solver;
} svp_solver_run_config;

SVP_API void svp_solver_config_default(svp_solver_config* config);
SVP_API void svp_solver_run_config_default(svp_solver_run_config* config);
/* JSON: {"grid": {"n", "generator", "seed"}, "max_sweeps", "patience",
 *        "directional": true | false | "auto", "escape_candidates"};
 * missing keys keep defaults. */
SVP_API svp_status svp_solver_run_config_load(const char* path, svp_solver_run_config* out);

/* Writes num_cameras world-to-camera rotations (rotations[0] = identity). */
SVP_API svp_status svp_solve(const svp_scorer* scorer, size_t num_cameras, const svp_grid* grid,
                             const svp_solver_config* config, double* rotations,
                             double* total_energy, size_t* sweeps_used);

/* ---- look-at frame ---------------------------------------------------- */

SVP_API svp_status svp_closest_point_to_axes(size_t n, const double* rotations,
                                             const double* translations, double out[3]);
/* targets: 3n doubles. */
SVP_API svp_status svp_normalize_scene(size_t n, const double* rotations,
                                       const double* translations, double lookat[3],
                                       double* scale, double* targets);
SVP_API svp_status svp_first_camera_frame_targets(size_t n, const double* rotations,
                                                  const double* translations, double* targets);

/* ---- evaluation ------------------------------------------------------- */

typedef struct svp_eval_report {
  size_t num_cameras;
  double rotation_accuracy[4];      /* 5, 10, 15, 30 degrees */
  double camera_center_accuracy[3]; /* 0.1, 0.2, 0.3 sigma */
  double translation_accuracy;      /* 0.1 sigma */
  double rotation_auc;              /* [0, 60] degrees */
  double center_auc;                /* [0, 0.4] sigma */
  double sigma;
} svp_eval_report;

/* Similarity mapping source points onto target points (3n doubles each). */
SVP_API svp_status svp_umeyama_align(size_t n, const double* source, const double* target,
                                     double* scale, double rotation[9], double translation[3]);
SVP_API svp_status svp_translation_align(size_t n, const double* pred_rotations,
                                         const double* pred_translations,
                                         const double* gt_rotations,
                                         const double* gt_translations, double* scale,
                                         double offset[3]);
SVP_API svp_status svp_accuracy_curve_auc(const double* errors, size_t n, double max_threshold,
                                          double* out);
SVP_API svp_status svp_evaluate(const svp_scene* pred, const svp_scene* gt, double sigma,
                                svp_eval_report* out);

/* An ordered collection of per-scene reports, serialisable as CSV / JSON. */
typedef struct svp_report_set svp_report_set;

SVP_API svp_status svp_report_set_create(svp_report_set** out);
SVP_API void svp_report_set_free(svp_report_set* set);
/* Evaluates pred against gt and appends the result under gt's id. */
SVP_API svp_status svp_report_set_add_evaluation(svp_report_set* set, const svp_scene* pred,
                                                 const svp_scene* gt, double sigma);
SVP_API svp_status svp_report_set_add(svp_report_set* set, const char* id,
                                      const svp_eval_report* report);
/* Appends the scene rows of a CSV written by svp_report_set_write_csv. */
SVP_API svp_status svp_report_set_load_csv(svp_report_set* set, const char* path);
SVP_API size_t svp_report_set_size(const svp_report_set* set);
SVP_API svp_status svp_report_set_get(const svp_report_set* set, size_t k, svp_eval_report* out);
SVP_API svp_status svp_report_set_mean(const svp_report_set* set, svp_eval_report* out);
SVP_API svp_status svp_report_set_write_csv(const svp_report_set* set, const char* path,
                                            int with_mean_row);
SVP_API svp_status svp_report_set_write_json(const svp_report_set* set, const char* path);
/* Threshold sweep; only reports added through svp_report_set_add_evaluation
 * carry the errors it needs. */
SVP_API svp_status svp_report_set_write_sweep(const svp_report_set* set, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* SVP_SVP_H_ */
