#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svp/frame.hpp"
#include "svp/synth.hpp"

namespace svp {

struct SolveDiagnostics {
  double energy = 0.0;
  size_t sweeps = 0;
  std::string translation_source;
};

// One JSON document per scene, shared by ground-truth scenes and solver
// predictions:
//   {"id": "...",
//    "rig_spec": {"num_cameras", "radius_min", "radius_max", "jitter",
//                 "lookat": [x, y, z], "seed"},          (scenes only)
//    "sigma": <scene scale>,                             (scenes only)
//    "solver": {"energy", "sweeps", "translation_source"},  (predictions only)
//    "poses": [{"q": [w, x, y, z], "t": [x, y, z]}, ...]}
// Rotations are world-to-camera unit quaternions.
struct PoseFile {
  std::string id;
  std::vector<CameraPose> poses;
  std::optional<RigSpec> rig_spec;
  std::optional<double> sigma;
  std::optional<SolveDiagnostics> solver;
};

std::string PoseFileToJson(const PoseFile& file);
// Throws kFormat for malformed documents.
PoseFile PoseFileFromJson(const std::string& text);
void SavePoseFile(const PoseFile& file, const std::string& path);
PoseFile LoadPoseFile(const std::string& path);

PoseFile SceneToPoseFile(const std::string& id, const SyntheticScene& scene);

}  // namespace svp
