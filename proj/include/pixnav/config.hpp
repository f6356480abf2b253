#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pixnav/flight.hpp"
#include "pixnav/geometry.hpp"
#include "pixnav/instruct.hpp"

namespace pixnav {

enum class FlightMode { planar, full };  // "2d" / "3d"

FlightMode mode_from_string(std::string_view s);
std::string_view to_string(FlightMode m);

/// Every tunable of a run, defaulting to the published settings.
struct RunConfig {
  std::filesystem::path scene;
  int width = 224;
  int height = 224;
  double hfov_deg = 90.0;
  double vfov_deg = 90.0;
  int kx = 3;
  int ky = 3;
  double alpha = 65.0;
  double fallback_threshold = 0.015;
  double step_length = 1.0;
  int max_steps = 500;
  int stagnation_threshold = 30;
  int stagnation_window = 20;
  double voxel_size = 0.25;
  int pixel_stride = 2;
  bool hit_only = false;
  double collision_inflate = 0.0;
  bool goto_post_rotation = false;
  double cover_radius = 0.05;
  bool cumulative_paint = true;
  std::uint64_t seed = 0;
  FlightMode mode = FlightMode::full;
  double altitude = 1.5;  // pinned height in planar mode

  CameraIntrinsics intrinsics() const;
  InstructParams instruct_params() const;
  OracleOptions oracle_options() const;
  EpisodeConfig episode_config() const;
  /// Candidate grid for the mode: k_x across the middle row when planar.
  CandidateGrid candidate_grid() const;
};

/// Throws ConfigError on unknown keys, wrong types or non-positive values.
void validate(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace pixnav
