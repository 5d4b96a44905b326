#include <gtest/gtest.h>

#include <sstream>

#include "svp/report.hpp"
#include "svp/scene_io.hpp"
#include "test_util.hpp"

namespace svp {
namespace {

using testing::ThrowsCode;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

TEST(PoseFile, SceneRoundTrip) {
  const SyntheticScene scene = GenerateScene({5, 0.7, 1.3, 0.05, Vec3(0.1, -0.2, 0.3), 4});
  const PoseFile file = SceneToPoseFile("scene_004", scene);
  const std::string text = PoseFileToJson(file);
  const PoseFile back = PoseFileFromJson(text);
  EXPECT_EQ(back.id, "scene_004");
  ASSERT_TRUE(back.rig_spec.has_value());
  EXPECT_EQ(*back.rig_spec, scene.spec);
  ASSERT_TRUE(back.sigma.has_value());
  EXPECT_EQ(*back.sigma, scene.sigma);
  EXPECT_FALSE(back.solver.has_value());
  ASSERT_EQ(back.poses.size(), scene.poses.size());
  for (size_t i = 0; i < back.poses.size(); ++i) {
    EXPECT_LT(GeodesicDistance(back.poses[i].rotation, scene.poses[i].rotation), 1e-12);
    EXPECT_EQ(back.poses[i].translation, scene.poses[i].translation);
  }
  // Regenerating from the stored rig spec is bit-identical.
  const SyntheticScene again = GenerateScene(*back.rig_spec);
  EXPECT_EQ(PoseFileToJson(SceneToPoseFile("scene_004", again)), text);
}

TEST(PoseFile, PredictionDiagnostics) {
  PoseFile file;
  file.id = "x";
  file.poses = {CameraPose{}, CameraPose{Rotation::AboutZ(0.5), Vec3(0, 0, 1)}};
  file.solver = SolveDiagnostics{-1.25, 3, "constant-z"};
  const PoseFile back = PoseFileFromJson(PoseFileToJson(file));
  ASSERT_TRUE(back.solver.has_value());
  EXPECT_EQ(back.solver->energy, -1.25);
  EXPECT_EQ(back.solver->sweeps, 3u);
  EXPECT_EQ(back.solver->translation_source, "constant-z");
  EXPECT_FALSE(back.rig_spec.has_value());
}

TEST(PoseFile, Malformed) {
  for (const char* text : {"", "{", "[]", R"({"id": "a"})", R"({"id": "a", "poses": [{"q": [1, 0, 0], "t": [0, 0, 0]}]})",
                           R"({"id": "a", "poses": [{"q": [0, 0, 0, 0], "t": [0, 0, 0]}]})",
                           R"({"id": "a", "poses": [{"q": [1, 0, 0, 0], "t": [0, 0]}]})",
                           R"({"id": 5, "poses": []})"}) {
    EXPECT_TRUE(ThrowsCode([&] { PoseFileFromJson(text); }, ErrorCode::kFormat)) << text;
  }
  EXPECT_TRUE(ThrowsCode([] { LoadPoseFile("/nonexistent/dir/file.json"); }, ErrorCode::kIo));
}

SceneReport Sample(const std::string& id, double base) {
  SceneReport s;
  s.id = id;
  s.report.num_cameras = 4;
  s.report.sigma = 1.5 + base;
  s.report.rotation_accuracy = {base, 0.5, 0.75, 1.0};
  s.report.camera_center_accuracy = {0.25, 0.5, 1.0};
  s.report.translation_accuracy = 0.125;
  s.report.rotation_auc = 0.3;
  s.report.center_auc = 0.6;
  return s;
}

TEST(Report, CsvSchemaAndRoundTrip) {
  const std::vector<SceneReport> reports = {Sample("a", 0.0), Sample("b", 1.0)};
  const std::string csv = ReportsToCsv(reports, true);
  const std::vector<std::string> lines = Lines(csv);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0],
            "scene_id,num_cameras,sigma,rot_acc_5,rot_acc_10,rot_acc_15,rot_acc_30,"
            "center_acc_0.1,center_acc_0.2,center_acc_0.3,trans_acc_0.1,rot_auc_60,"
            "center_auc_0.4");
  EXPECT_EQ(lines[1], "a,4,1.5,0,0.5,0.75,1,0.25,0.5,1,0.125,0.3,0.6");
  EXPECT_EQ(lines[3], "mean,4,2,0.5,0.5,0.75,1,0.25,0.5,1,0.125,0.3,0.6");

  const std::vector<SceneReport> back = ParseReportCsv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].id, "b");
  EXPECT_EQ(back[1].report.rotation_accuracy[0], 1.0);
  EXPECT_EQ(ReportsToCsv(back, true), csv);
  EXPECT_EQ(Lines(ReportsToCsv(reports, false)).size(), 3u);

  EXPECT_TRUE(ThrowsCode([] { ParseReportCsv("id,x\n"); }, ErrorCode::kFormat));
  EXPECT_TRUE(ThrowsCode([&] { ParseReportCsv(lines[0] + "\na,1,2\n"); }, ErrorCode::kFormat));
  EXPECT_TRUE(ThrowsCode([&] { ParseReportCsv(lines[0] + "\na,4,x,0,0,0,0,0,0,0,0,0,0\n"); },
                         ErrorCode::kFormat));
  EXPECT_TRUE(ThrowsCode([] { ReportsToCsv(std::vector<SceneReport>{Sample("a,b", 0.0)}, false); },
                         ErrorCode::kInvalidArgument));
}

TEST(Report, JsonLayout) {
  const std::vector<SceneReport> reports = {Sample("a", 0.0), Sample("b", 1.0)};
  const std::string json = ReportsToJson(reports);
  EXPECT_NE(json.find("\"scenes\""), std::string::npos);
  EXPECT_NE(json.find("\"aggregate\""), std::string::npos);
  EXPECT_NE(json.find("\"rot_acc_15\": 0.75"), std::string::npos);
  EXPECT_LT(json.find("\"id\": \"a\""), json.find("\"id\": \"b\""));
}

TEST(Report, SweepCurves) {
  SceneErrors s;
  s.id = "a";
  s.sigma = 2.0;
  s.errors.rotation_deg = {0.5, 10.5, 70.0};
  s.errors.center = {0.0, 0.5};
  s.errors.translation = {0.1, 0.3};
  const std::vector<SceneErrors> scenes = {s};
  const std::vector<std::string> lines = Lines(SweepCsv(scenes));
  ASSERT_EQ(lines.size(), 1u + 61 + 41 + 41);
  EXPECT_EQ(lines[0], "metric,threshold,accuracy");
  EXPECT_EQ(lines[1], "rotation_deg,0,0");
  EXPECT_EQ(lines[2], "rotation_deg,1,0.3333333333");
  EXPECT_EQ(lines[12], "rotation_deg,11,0.6666666667");
  EXPECT_EQ(lines[61], "rotation_deg,60,0.6666666667");
  EXPECT_EQ(lines[62], "center_sigma,0,0");
  EXPECT_EQ(lines[63], "center_sigma,0.01,0.5");
  EXPECT_EQ(lines[102], "center_sigma,0.4,1");
  EXPECT_EQ(lines[103], "translation_sigma,0,0");
  EXPECT_EQ(lines.back(), "translation_sigma,0.4,1");
  EXPECT_TRUE(ThrowsCode([] { SweepCsv(std::vector<SceneErrors>{}); }, ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace svp
