#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixnav/config.hpp"
#include "pixnav/scene.hpp"

namespace pixnav {

/// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double unit_draw(std::mt19937_64& rng);

struct PoseSampling {
  double clearance = 0.5;
  int max_draws = 10000;
  bool planar = false;    // pin the height to `altitude`
  double altitude = 1.5;
};

/// Rejection sampling inside the scene bounds: position at least `clearance`
/// from every box, yaw uniform. Throws SceneError after max_draws rejections.
Pose sample_pose(const SceneDescription& scene, std::mt19937_64& rng, const PoseSampling& opts = {});

struct DataSample {
  std::size_t id = 0;
  std::string scene;
  Pose pose;
  std::string depth_path;  // relative to the dataset root
  std::string grad_path;
  std::string color_path;
  PixelCoord goto_px;
  PixelCoord lookat_px;
  bool fallback = false;
};

nlohmann::json to_json(const DataSample& s);
DataSample sample_from_json(const nlohmann::json& j);

struct DatagenOptions {
  std::size_t count = 0;
  bool trajectory = false;     // chain poses by flying the oracle, paint accumulated
  int trajectory_length = 50;  // samples per trajectory before a fresh start
};

struct DatasetSummary {
  std::size_t count = 0;
  std::size_t fallbacks = 0;
  double fallback_fraction() const { return count == 0 ? 0.0 : static_cast<double>(fallbacks) / count; }
};

/// Writes manifest.jsonl, dataset.json and the depth/, grad/ and color/
/// rasters under `out`. Deterministic in (scene, config, options).
DatasetSummary generate_dataset(const SceneDescription& scene, const RunConfig& config, const DatagenOptions& options,
                                const std::filesystem::path& out);

struct ValidationReport {
  std::size_t samples = 0;
  std::size_t fallbacks = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Re-checks a dataset: manifest/records agree, rasters exist with the
/// recorded dimensions, labels finite and in-bounds, gradients equal the
/// Sobel response of the stored depth.
ValidationReport validate_dataset(const std::filesystem::path& root);

}  // namespace pixnav
