#pragma once

#include <span>
#include <string>
#include <vector>

#include "svp/eval.hpp"

namespace svp {

struct SceneReport {
  std::string id;
  EvalReport report;
};

// Stable CSV column order. New thresholds are appended, never inserted.
const std::vector<std::string>& ReportColumns();

// Field-wise mean over scenes (num_cameras and sigma included).
EvalReport MeanReport(std::span<const SceneReport> scenes);

// Header, one row per scene, then a "mean" row when requested.
std::string ReportsToCsv(std::span<const SceneReport> scenes, bool with_mean_row);
// {"scenes": [{"id", ...metrics}], "aggregate": {...}}
std::string ReportsToJson(std::span<const SceneReport> scenes);
// Reads rows written by ReportsToCsv, dropping any "mean" row. Throws kFormat
// when the header differs from ReportColumns().
std::vector<SceneReport> ParseReportCsv(const std::string& text);

struct SceneErrors {
  std::string id;
  EvalErrors errors;
  double sigma = 0.0;
};

// Long-format accuracy curves for plotting: columns metric,threshold,accuracy
// with metric in {rotation_deg, center_sigma, translation_sigma}; each value
// is the mean over scenes of the per-scene fraction below the threshold.
// Rotation thresholds run 0..60 deg in 1 deg steps, center and translation
// 0..0.4 sigma in 0.01 steps.
std::string SweepCsv(std::span<const SceneErrors> scenes);

}  // namespace svp
