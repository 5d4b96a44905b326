#include "svp/scene_io.hpp"

#include <json.hpp>

#include "binary_io.hpp"
#include "svp/error.hpp"

namespace svp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json Vec3ToJson(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Vec3 Vec3FromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kFormat, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string PoseFileToJson(const PoseFile& file) {
  ordered_json doc;
  doc["id"] = file.id;
  if (file.rig_spec) {
    const RigSpec& r = *file.rig_spec;
    doc["rig_spec"] = {{"num_cameras", r.num_cameras}, {"radius_min", r.radius_min},
                       {"radius_max", r.radius_max},   {"jitter", r.jitter},
                       {"lookat", Vec3ToJson(r.lookat)}, {"seed", r.seed}};
  }
  if (file.sigma) doc["sigma"] = *file.sigma;
  if (file.solver) {
    doc["solver"] = {{"energy", file.solver->energy},
                     {"sweeps", file.solver->sweeps},
                     {"translation_source", file.solver->translation_source}};
  }
  ordered_json poses = ordered_json::array();
  for (const CameraPose& p : file.poses) {
    const Eigen::Quaterniond q = p.rotation.quaternion();
    poses.push_back({{"q", {q.w(), q.x(), q.y(), q.z()}}, {"t", Vec3ToJson(p.translation)}});
  }
  doc["poses"] = std::move(poses);
  return doc.dump(2) + "\n";
}

PoseFile PoseFileFromJson(const std::string& text) {
  PoseFile file;
  try {
    const json doc = json::parse(text);
    file.id = doc.at("id").get<std::string>();
    if (doc.contains("rig_spec")) {
      const json& r = doc.at("rig_spec");
      RigSpec spec;
      spec.num_cameras = r.at("num_cameras").get<size_t>();
      spec.radius_min = r.at("radius_min").get<double>();
      spec.radius_max = r.at("radius_max").get<double>();
      spec.jitter = r.at("jitter").get<double>();
      spec.lookat = Vec3FromJson(r.at("lookat"));
      spec.seed = r.at("seed").get<uint64_t>();
      file.rig_spec = spec;
    }
    if (doc.contains("sigma")) file.sigma = doc.at("sigma").get<double>();
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      file.solver = SolveDiagnostics{s.at("energy").get<double>(), s.at("sweeps").get<size_t>(),
                                     s.at("translation_source").get<std::string>()};
    }
    for (const json& p : doc.at("poses")) {
      const json& q = p.at("q");
      if (!q.is_array() || q.size() != 4) throw Error(ErrorCode::kFormat, "expected a quaternion");
      const Eigen::Quaterniond quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                    q[3].get<double>());
      file.poses.push_back({Rotation::FromQuaternion(quat), Vec3FromJson(p.at("t"))});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed pose file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormat) throw;
    throw Error(ErrorCode::kFormat, std::string("malformed pose file: ") + e.what());
  }
  return file;
}

void SavePoseFile(const PoseFile& file, const std::string& path) {
  detail::WriteFileAtomic(path, PoseFileToJson(file));
}

PoseFile LoadPoseFile(const std::string& path) {
  return PoseFileFromJson(detail::ReadFile(path));
}

PoseFile SceneToPoseFile(const std::string& id, const SyntheticScene& scene) {
  PoseFile file;
  file.id = id;
  file.poses = scene.poses;
  file.rig_spec = scene.spec;
  file.sigma = scene.sigma;
  return file;
}

}  // namespace svp
