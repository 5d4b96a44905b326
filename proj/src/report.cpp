#include "svp/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "svp/error.hpp"

namespace svp {

namespace {

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<double> Flatten(const EvalReport& r) {
  return {static_cast<double>(r.num_cameras),
          r.sigma,
          r.rotation_accuracy[0],
          r.rotation_accuracy[1],
          r.rotation_accuracy[2],
          r.rotation_accuracy[3],
          r.camera_center_accuracy[0],
          r.camera_center_accuracy[1],
          r.camera_center_accuracy[2],
          r.translation_accuracy,
          r.rotation_auc,
          r.center_auc};
}

EvalReport Unflatten(const std::vector<double>& v) {
  EvalReport r;
  r.num_cameras = static_cast<size_t>(v[0]);
  r.sigma = v[1];
  for (size_t k = 0; k < 4; ++k) r.rotation_accuracy[k] = v[2 + k];
  for (size_t k = 0; k < 3; ++k) r.camera_center_accuracy[k] = v[6 + k];
  r.translation_accuracy = v[9];
  r.rotation_auc = v[10];
  r.center_auc = v[11];
  return r;
}

nlohmann::ordered_json ReportToJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  const auto& columns = ReportColumns();
  const std::vector<double> values = Flatten(r);
  j[columns[1]] = r.num_cameras;
  for (size_t k = 1; k < values.size(); ++k) j[columns[k + 1]] = values[k];
  return j;
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::vector<std::string>& ReportColumns() {
  static const std::vector<std::string> columns = {
      "scene_id",       "num_cameras",    "sigma",          "rot_acc_5",
      "rot_acc_10",     "rot_acc_15",     "rot_acc_30",     "center_acc_0.1",
      "center_acc_0.2", "center_acc_0.3", "trans_acc_0.1",  "rot_auc_60",
      "center_auc_0.4"};
  return columns;
}

EvalReport MeanReport(std::span<const SceneReport> scenes) {
  SVP_CHECK_ARG(!scenes.empty(), "cannot average an empty report set");
  std::vector<double> sum(Flatten(EvalReport{}).size(), 0.0);
  for (const SceneReport& s : scenes) {
    const std::vector<double> v = Flatten(s.report);
    for (size_t k = 0; k < v.size(); ++k) sum[k] += v[k];
  }
  for (double& v : sum) v /= static_cast<double>(scenes.size());
  EvalReport mean = Unflatten(sum);
  mean.num_cameras = static_cast<size_t>(sum[0] + 0.5);
  return mean;
}

std::string ReportsToCsv(std::span<const SceneReport> scenes, bool with_mean_row) {
  std::string out;
  const auto& columns = ReportColumns();
  for (size_t k = 0; k < columns.size(); ++k) {
    out += (k ? "," : "") + columns[k];
  }
  out += "\n";
  auto row = [&](const std::string& id, const EvalReport& r) {
    SVP_CHECK_ARG(id.find_first_of(",\n\"") == std::string::npos,
                  "scene ids may not contain commas, quotes or newlines");
    out += id;
    const std::vector<double> v = Flatten(r);
    for (size_t k = 0; k < v.size(); ++k) {
      out += "," + (k == 0 ? std::to_string(r.num_cameras) : FormatNumber(v[k]));
    }
    out += "\n";
  };
  for (const SceneReport& s : scenes) row(s.id, s.report);
  if (with_mean_row && !scenes.empty()) row("mean", MeanReport(scenes));
  return out;
}

std::string ReportsToJson(std::span<const SceneReport> scenes) {
  nlohmann::ordered_json doc;
  doc["scenes"] = nlohmann::ordered_json::array();
  for (const SceneReport& s : scenes) {
    nlohmann::ordered_json entry;
    entry["id"] = s.id;
    entry.update(ReportToJson(s.report));
    doc["scenes"].push_back(std::move(entry));
  }
  if (!scenes.empty()) doc["aggregate"] = ReportToJson(MeanReport(scenes));
  return doc.dump(2) + "\n";
}

std::vector<SceneReport> ParseReportCsv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || SplitLine(line) != ReportColumns()) {
    throw Error(ErrorCode::kFormat, "report CSV header does not match the expected columns");
  }
  std::vector<SceneReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitLine(line);
    if (cells.size() != ReportColumns().size()) {
      throw Error(ErrorCode::kFormat, "report CSV row has the wrong number of cells");
    }
    if (cells[0] == "mean") continue;
    std::vector<double> values;
    try {
      for (size_t k = 1; k < cells.size(); ++k) values.push_back(std::stod(cells[k]));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kFormat, "report CSV cell is not a number");
    }
    out.push_back({cells[0], Unflatten(values)});
  }
  return out;
}

std::string SweepCsv(std::span<const SceneErrors> scenes) {
  SVP_CHECK_ARG(!scenes.empty(), "sweep needs at least one scene");
  std::string out = "metric,threshold,accuracy\n";
  auto emit = [&](const char* metric, size_t steps, double step,
                  auto&& errors_of, auto&& scale_of) {
    for (size_t k = 0; k <= steps; ++k) {
      const double threshold = step * static_cast<double>(k);
      double mean = 0.0;
      for (const SceneErrors& s : scenes) {
        mean += FractionBelow(errors_of(s), threshold * scale_of(s));
      }
      mean /= static_cast<double>(scenes.size());
      out += std::string(metric) + "," + FormatNumber(threshold) + "," + FormatNumber(mean) + "\n";
    }
  };
  auto unit = [](const SceneErrors&) { return 1.0; };
  auto sigma = [](const SceneErrors& s) { return s.sigma; };
  emit("rotation_deg", 60, 1.0, [](const SceneErrors& s) -> const auto& { return s.errors.rotation_deg; }, unit);
  emit("center_sigma", 40, 0.01, [](const SceneErrors& s) -> const auto& { return s.errors.center; }, sigma);
  emit("translation_sigma", 40, 0.01,
       [](const SceneErrors& s) -> const auto& { return s.errors.translation; }, sigma);
  return out;
}

}  // namespace svp
