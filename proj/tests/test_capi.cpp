// Exercises libsvp through its C header only.
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "svp/svp.h"

namespace {

namespace fs = std::filesystem;

const double kIdentity[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

void RotZ(double angle, double out[9]) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double m[9] = {c, -s, 0, s, c, 0, 0, 0, 1};
  std::memcpy(out, m, sizeof(m));
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("svp_capi_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(svp_status_name(SVP_OK), "ok");
  EXPECT_STREQ(svp_status_name(SVP_ERR_CORRUPT_TABLE), "corrupt-table");
  EXPECT_STREQ(svp_status_name(SVP_ERR_DEGENERATE_GEOMETRY), "degenerate-geometry");
  EXPECT_GT(std::strlen(svp_version()), 0u);
  EXPECT_EQ(svp_derive_seed(1, 2), svp_derive_seed(1, 2));
  EXPECT_NE(svp_derive_seed(1, 2), svp_derive_seed(1, 3));
}

TEST(CApi, GridLifecycle) {
  svp_grid* grid = nullptr;
  EXPECT_EQ(svp_grid_build(0, SVP_GRID_SUPER_FIBONACCI, 0, &grid), SVP_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(svp_last_error()).size(), 0u);
  ASSERT_EQ(svp_grid_build(72, SVP_GRID_SUPER_FIBONACCI, 0, &grid), SVP_OK);
  EXPECT_EQ(svp_grid_size(grid), 72u);
  EXPECT_GT(svp_grid_covering_radius(grid), 0.5);

  double r[9];
  ASSERT_EQ(svp_grid_rotation(grid, 17, r), SVP_OK);
  size_t index = 0;
  double distance = -1;
  ASSERT_EQ(svp_grid_nearest(grid, r, &index, &distance), SVP_OK);
  EXPECT_EQ(index, 17u);
  EXPECT_NEAR(distance, 0.0, 1e-7);
  EXPECT_EQ(svp_grid_rotation(grid, 72, r), SVP_ERR_INVALID_ARGUMENT);

  const double not_rotation[9] = {2, 0, 0, 0, 1, 0, 0, 0, 1};
  EXPECT_EQ(svp_grid_nearest(grid, not_rotation, &index, &distance), SVP_ERR_INVALID_ARGUMENT);

  svp_grid_generator gen;
  EXPECT_EQ(svp_grid_generator_parse("random_uniform", &gen), SVP_OK);
  EXPECT_EQ(gen, SVP_GRID_RANDOM_UNIFORM);
  EXPECT_EQ(svp_grid_generator_parse("nope", &gen), SVP_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(svp_grid_generator_name(SVP_GRID_SUPER_FIBONACCI), "super_fibonacci");

  TempDir dir;
  ASSERT_EQ(svp_grid_save(grid, (dir / "g.so3g").c_str()), SVP_OK);
  svp_grid* loaded = nullptr;
  ASSERT_EQ(svp_grid_load((dir / "g.so3g").c_str(), &loaded), SVP_OK);
  uint32_t n = 0;
  uint64_t seed = 1;
  ASSERT_EQ(svp_grid_spec(loaded, &n, &gen, &seed), SVP_OK);
  EXPECT_EQ(n, 72u);
  EXPECT_EQ(gen, SVP_GRID_SUPER_FIBONACCI);
  EXPECT_EQ(seed, 0u);
  EXPECT_EQ(svp_grid_load((dir / "missing").c_str(), &loaded), SVP_ERR_IO);
  svp_grid_free(loaded);
  svp_grid_free(grid);
  svp_grid_free(nullptr);
}

TEST(CApi, Geodesic) {
  double rz[9];
  RotZ(M_PI / 2, rz);
  double d = 0;
  ASSERT_EQ(svp_geodesic_distance(kIdentity, rz, &d), SVP_OK);
  EXPECT_NEAR(d, M_PI / 2, 1e-12);
  EXPECT_EQ(svp_geodesic_distance(kIdentity, rz, nullptr), SVP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SynthSolveEvaluate) {
  svp_rig_spec spec{6, 0.7, 1.3, 0.0, {0, 0, 0}, 3};
  svp_scene* gt = nullptr;
  ASSERT_EQ(svp_scene_generate(&spec, "scene_a", &gt), SVP_OK);
  EXPECT_STREQ(svp_scene_id(gt), "scene_a");
  ASSERT_EQ(svp_scene_num_cameras(gt), 6u);
  double sigma = 0;
  ASSERT_EQ(svp_scene_sigma(gt, &sigma), SVP_OK);
  EXPECT_GT(sigma, 0.0);

  svp_scorer_options options;
  svp_scorer_options_default(&options);
  EXPECT_EQ(options.kappa, 50.0);
  svp_scorer* scorer = nullptr;
  ASSERT_EQ(svp_scorer_from_scene(gt, &options, &scorer), SVP_OK);
  EXPECT_EQ(svp_scorer_directional(scorer), 0);

  svp_grid* grid = nullptr;
  ASSERT_EQ(svp_grid_build(4608, SVP_GRID_SUPER_FIBONACCI, 0, &grid), SVP_OK);
  svp_solver_config config;
  svp_solver_config_default(&config);
  EXPECT_EQ(config.max_sweeps, 50u);
  EXPECT_EQ(config.directional, -1);
  std::vector<double> rotations(9 * 6);
  double energy = 0;
  size_t sweeps = 0;
  ASSERT_EQ(svp_solve(scorer, 6, grid, &config, rotations.data(), &energy, &sweeps), SVP_OK);
  for (int k = 0; k < 9; ++k) EXPECT_EQ(rotations[k], kIdentity[k]);
  EXPECT_GE(sweeps, 1u);
  EXPECT_LE(energy, 0.0);

  // Prediction = solved rotations + ground-truth translations.
  std::vector<double> translations(3 * 6);
  for (size_t i = 0; i < 6; ++i) {
    double r[9];
    ASSERT_EQ(svp_scene_pose(gt, i, r, &translations[3 * i]), SVP_OK);
  }
  svp_scene* pred = nullptr;
  ASSERT_EQ(svp_scene_create("scene_a", 6, rotations.data(), translations.data(), &pred), SVP_OK);
  ASSERT_EQ(svp_scene_set_solver_info(pred, energy, sweeps, "gt"), SVP_OK);
  svp_eval_report report;
  ASSERT_EQ(svp_evaluate(pred, gt, sigma, &report), SVP_OK);
  EXPECT_EQ(report.num_cameras, 6u);
  EXPECT_EQ(report.rotation_accuracy[3], 1.0);

  svp_eval_report perfect;
  ASSERT_EQ(svp_evaluate(gt, gt, sigma, &perfect), SVP_OK);
  EXPECT_EQ(perfect.rotation_accuracy[0], 1.0);
  EXPECT_EQ(perfect.translation_accuracy, 1.0);
  EXPECT_EQ(perfect.center_auc, 1.0);

  TempDir dir;
  svp_report_set* set = nullptr;
  ASSERT_EQ(svp_report_set_create(&set), SVP_OK);
  ASSERT_EQ(svp_report_set_add_evaluation(set, pred, gt, sigma), SVP_OK);
  ASSERT_EQ(svp_report_set_add_evaluation(set, gt, gt, sigma), SVP_OK);
  EXPECT_EQ(svp_report_set_size(set), 2u);
  svp_eval_report mean;
  ASSERT_EQ(svp_report_set_mean(set, &mean), SVP_OK);
  EXPECT_NEAR(mean.rotation_accuracy[0], 0.5 * (report.rotation_accuracy[0] + 1.0), 1e-12);
  ASSERT_EQ(svp_report_set_write_csv(set, (dir / "r.csv").c_str(), 1), SVP_OK);
  ASSERT_EQ(svp_report_set_write_json(set, (dir / "r.json").c_str()), SVP_OK);
  ASSERT_EQ(svp_report_set_write_sweep(set, (dir / "s.csv").c_str()), SVP_OK);

  svp_report_set* reread = nullptr;
  ASSERT_EQ(svp_report_set_create(&reread), SVP_OK);
  ASSERT_EQ(svp_report_set_load_csv(reread, (dir / "r.csv").c_str()), SVP_OK);
  EXPECT_EQ(svp_report_set_size(reread), 2u);
  // Rows read back from CSV have no raw errors for a sweep.
  EXPECT_NE(svp_report_set_write_sweep(reread, (dir / "s2.csv").c_str()), SVP_OK);
  svp_report_set_free(reread);
  svp_report_set_free(set);

  // Scene file round trip.
  ASSERT_EQ(svp_scene_save(pred, (dir / "p.json").c_str()), SVP_OK);
  svp_scene* back = nullptr;
  ASSERT_EQ(svp_scene_load((dir / "p.json").c_str(), &back), SVP_OK);
  EXPECT_EQ(svp_scene_num_cameras(back), 6u);
  svp_scene_free(back);
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_EQ(svp_scene_load((dir / "bad.json").c_str(), &back), SVP_ERR_FORMAT);

  svp_scene_free(pred);
  svp_scorer_free(scorer);
  svp_grid_free(grid);
  svp_scene_free(gt);
}

TEST(CApi, TablesAndScores) {
  svp_grid* grid = nullptr;
  ASSERT_EQ(svp_grid_build(200, SVP_GRID_RANDOM_UNIFORM, 5, &grid), SVP_OK);
  svp_scorer* constant = nullptr;
  ASSERT_EQ(svp_scorer_constant(3.2, &constant), SVP_OK);
  std::vector<double> scores(200);
  ASSERT_EQ(svp_score_over_grid(constant, 0, 1, grid, 2, scores.data()), SVP_OK);
  for (double s : scores) EXPECT_EQ(s, 3.2);
  EXPECT_EQ(svp_score_over_grid(constant, 1, 1, grid, 1, scores.data()), SVP_ERR_INVALID_ARGUMENT);
  double nll = 0;
  ASSERT_EQ(svp_nll(scores.data(), scores.size(), kIdentity, grid, &nll), SVP_OK);
  EXPECT_NEAR(nll, std::log(200.0), 1e-9);
  const double a[3] = {1, 2, 3}, zero[3] = {0, 0, 0};
  EXPECT_EQ(svp_l1_translation_loss(a, zero), 6.0);

  svp_table* table = nullptr;
  ASSERT_EQ(svp_table_tabulate(constant, 3, grid, 1, &table), SVP_OK);
  EXPECT_EQ(svp_table_num_pairs(table), 3u);
  EXPECT_EQ(svp_table_num_cameras(table), 3u);

  TempDir dir;
  ASSERT_EQ(svp_table_save(table, (dir / "t.rpet").c_str()), SVP_OK);
  svp_table* loaded = nullptr;
  ASSERT_EQ(svp_table_load((dir / "t.rpet").c_str(), &loaded), SVP_OK);
  uint32_t n = 0;
  svp_grid_generator gen;
  uint64_t seed = 0;
  ASSERT_EQ(svp_table_grid_spec(loaded, &n, &gen, &seed), SVP_OK);
  EXPECT_EQ(n, 200u);
  EXPECT_EQ(seed, 5u);

  svp_scorer* tabulated = nullptr;
  ASSERT_EQ(svp_scorer_from_table(loaded, grid, &tabulated), SVP_OK);
  double s = 0;
  ASSERT_EQ(svp_scorer_score(tabulated, 2, 0, kIdentity, &s), SVP_OK);
  EXPECT_FLOAT_EQ(s, 3.2f);
  svp_grid* other = nullptr;
  ASSERT_EQ(svp_grid_build(200, SVP_GRID_RANDOM_UNIFORM, 6, &other), SVP_OK);
  svp_scorer* mismatched = nullptr;
  EXPECT_EQ(svp_scorer_from_table(loaded, other, &mismatched), SVP_ERR_CONSISTENCY);

  // Truncate the file.
  const std::string path = dir / "t.rpet";
  fs::resize_file(path, fs::file_size(path) - 7);
  svp_table* broken = nullptr;
  EXPECT_EQ(svp_table_load(path.c_str(), &broken), SVP_ERR_CORRUPT_TABLE);
  std::ofstream(dir / "x.rpet") << "NOPEjunkjunkjunkjunk";
  EXPECT_EQ(svp_table_load((dir / "x.rpet").c_str(), &broken), SVP_ERR_FORMAT);

  svp_grid_free(other);
  svp_scorer_free(tabulated);
  svp_table_free(loaded);
  svp_table_free(table);
  svp_scorer_free(constant);
  svp_grid_free(grid);
}

TEST(CApi, FrameAndAlignment) {
  // Two cameras looking at the origin from +x and +y, unit distance.
  const double r1[9] = {0, 1, 0, 0, 0, -1, -1, 0, 0};  // optical axis -x
  const double r2[9] = {1, 0, 0, 0, 0, 1, 0, -1, 0};
  double rotations[18];
  std::memcpy(rotations, r1, sizeof(r1));
  std::memcpy(rotations + 9, r2, sizeof(r2));
  const double translations[6] = {0, 0, 1, 0, 0, 1};
  double p[3];
  ASSERT_EQ(svp_closest_point_to_axes(2, rotations, translations, p), SVP_OK);
  for (double v : p) EXPECT_NEAR(v, 0.0, 1e-12);
  double lookat[3], scale = 0, targets[6];
  ASSERT_EQ(svp_normalize_scene(2, rotations, translations, lookat, &scale, targets), SVP_OK);
  EXPECT_NEAR(scale, 1.0, 1e-12);
  EXPECT_NEAR(targets[2], 1.0, 1e-12);
  ASSERT_EQ(svp_first_camera_frame_targets(2, rotations, translations, targets), SVP_OK);
  EXPECT_NEAR(targets[0] * targets[0] + targets[1] * targets[1] + targets[2] * targets[2], 0.0, 1e-20);

  double same[18];
  std::memcpy(same, r1, sizeof(r1));
  std::memcpy(same + 9, r1, sizeof(r1));
  const double shifted[6] = {0, 0, 1, 0, 1, 1};
  EXPECT_EQ(svp_closest_point_to_axes(2, same, shifted, p), SVP_ERR_DEGENERATE_GEOMETRY);

  const double src[9] = {0, 0, 0, 1, 0, 0, 0, 1, 0};
  double dst[9];
  for (int i = 0; i < 9; ++i) dst[i] = 2.0 * src[i] + (i % 3 == 2 ? 1.0 : 0.0);
  double rot[9], t[3];
  ASSERT_EQ(svp_umeyama_align(3, src, dst, &scale, rot, t), SVP_OK);
  EXPECT_NEAR(scale, 2.0, 1e-9);
  EXPECT_NEAR(t[2], 1.0, 1e-9);
  const double coincident[9] = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  EXPECT_EQ(svp_umeyama_align(3, coincident, dst, &scale, rot, t), SVP_ERR_DEGENERATE_ALIGNMENT);

  double offset[3];
  ASSERT_EQ(svp_translation_align(2, rotations, translations, rotations, translations, &scale, offset),
            SVP_OK);
  EXPECT_NEAR(scale, 1.0, 1e-9);
  const double flipped[6] = {0, 0, -1, 0, 0, -1};
  EXPECT_EQ(svp_translation_align(2, rotations, flipped, rotations, translations, &scale, offset),
            SVP_ERR_ORIENTATION_FLIP);

  const double errors[1] = {30.0};
  double auc = 0;
  ASSERT_EQ(svp_accuracy_curve_auc(errors, 1, 60.0, &auc), SVP_OK);
  EXPECT_NEAR(auc, 0.5, 1e-3);
  EXPECT_EQ(svp_accuracy_curve_auc(errors, 0, 60.0, &auc), SVP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SolverConfigFile) {
  TempDir dir;
  std::ofstream(dir / "c.json") << R"({"grid": {"n": 576, "generator": "random_uniform", "seed": 4},
                                      "max_sweeps": 7, "directional": false, "escape_candidates": 2})";
  svp_solver_run_config config;
  ASSERT_EQ(svp_solver_run_config_load((dir / "c.json").c_str(), &config), SVP_OK);
  EXPECT_EQ(config.grid_n, 576u);
  EXPECT_EQ(config.grid_generator, SVP_GRID_RANDOM_UNIFORM);
  EXPECT_EQ(config.grid_seed, 4u);
  EXPECT_EQ(config.solver.max_sweeps, 7u);
  EXPECT_EQ(config.solver.directional, 0);
  EXPECT_EQ(config.solver.escape_candidates, 2u);
  std::ofstream(dir / "bad.json") << "[";
  EXPECT_EQ(svp_solver_run_config_load((dir / "bad.json").c_str(), &config), SVP_ERR_FORMAT);
}

}  // namespace
