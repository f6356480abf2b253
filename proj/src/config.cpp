#include "pixnav/config.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "pixnav/errors.hpp"

namespace pixnav {

FlightMode mode_from_string(std::string_view s) {
  if (s == "2d" || s == "2D") {
    return FlightMode::planar;
  }
  if (s == "3d" || s == "3D") {
    return FlightMode::full;
  }
  throw ConfigError(fmt::format("unknown mode '{}' (expected 2d or 3d)", s));
}

std::string_view to_string(FlightMode m) { return m == FlightMode::planar ? "2d" : "3d"; }

CameraIntrinsics RunConfig::intrinsics() const {
  constexpr double deg = 3.14159265358979323846 / 180.0;
  return CameraIntrinsics(width, height, hfov_deg * deg, vfov_deg * deg);
}

InstructParams RunConfig::instruct_params() const {
  InstructParams p;
  p.alpha = alpha;
  p.fallback_threshold = fallback_threshold;
  p.step_length = step_length;
  return p;
}

OracleOptions RunConfig::oracle_options() const {
  OracleOptions o;
  o.kx = kx;
  o.ky = ky;
  o.planar = mode == FlightMode::planar;
  o.cumulative = cumulative_paint;
  o.cover_radius = cover_radius;
  o.params = instruct_params();
  return o;
}

EpisodeConfig RunConfig::episode_config() const {
  EpisodeConfig e;
  e.intrinsics = intrinsics();
  e.step_length = step_length;
  e.max_steps = max_steps;
  e.stagnation_threshold = static_cast<std::size_t>(stagnation_threshold);
  e.stagnation_window = stagnation_window;
  e.collision_inflate = collision_inflate;
  e.voxel_size = voxel_size;
  e.seen.pixel_stride = pixel_stride;
  e.seen.hit_only = hit_only;
  e.motion.planar = mode == FlightMode::planar;
  e.motion.goto_post_rotation = goto_post_rotation;
  return e;
}

CandidateGrid RunConfig::candidate_grid() const {
  return mode == FlightMode::planar ? CandidateGrid::middle_row(kx, intrinsics())
                                    : CandidateGrid::uniform(kx, ky, intrinsics());
}

void validate(const RunConfig& c) {
  auto positive = [](std::string_view name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(fmt::format("{} must be positive, got {}", name, v));
    }
  };
  positive("width", c.width);
  positive("height", c.height);
  positive("kx", c.kx);
  positive("ky", c.ky);
  positive("alpha", c.alpha);
  positive("fallback_threshold", c.fallback_threshold);
  positive("step_length", c.step_length);
  positive("max_steps", c.max_steps);
  positive("stagnation_threshold", c.stagnation_threshold);
  positive("stagnation_window", c.stagnation_window);
  positive("voxel_size", c.voxel_size);
  positive("pixel_stride", c.pixel_stride);
  positive("cover_radius", c.cover_radius);
  if (!(c.hfov_deg > 0.0 && c.hfov_deg < 180.0) || !(c.vfov_deg > 0.0 && c.vfov_deg < 180.0)) {
    throw ConfigError("field of view must lie in (0, 180) degrees");
  }
  if (c.collision_inflate < 0.0) {
    throw ConfigError("collision_inflate must be non-negative");
  }
}

namespace {

template <typename T>
void take(const nlohmann::json& doc, const char* key, T& out) {
  if (const auto it = doc.find(key); it != doc.end()) {
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
    }
  }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  RunConfig c;
  const nlohmann::json known = to_json(c);
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
  std::string scene = c.scene.string();
  std::string mode{to_string(c.mode)};
  take(doc, "scene", scene);
  take(doc, "width", c.width);
  take(doc, "height", c.height);
  take(doc, "hfov_deg", c.hfov_deg);
  take(doc, "vfov_deg", c.vfov_deg);
  take(doc, "kx", c.kx);
  take(doc, "ky", c.ky);
  take(doc, "alpha", c.alpha);
  take(doc, "fallback_threshold", c.fallback_threshold);
  take(doc, "step_length", c.step_length);
  take(doc, "max_steps", c.max_steps);
  take(doc, "stagnation_threshold", c.stagnation_threshold);
  take(doc, "stagnation_window", c.stagnation_window);
  take(doc, "voxel_size", c.voxel_size);
  take(doc, "pixel_stride", c.pixel_stride);
  take(doc, "hit_only", c.hit_only);
  take(doc, "collision_inflate", c.collision_inflate);
  take(doc, "goto_post_rotation", c.goto_post_rotation);
  take(doc, "cover_radius", c.cover_radius);
  take(doc, "cumulative_paint", c.cumulative_paint);
  take(doc, "seed", c.seed);
  take(doc, "mode", mode);
  take(doc, "altitude", c.altitude);
  c.scene = scene;
  c.mode = mode_from_string(mode);
  validate(c);
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"scene", c.scene.string()},
          {"width", c.width},
          {"height", c.height},
          {"hfov_deg", c.hfov_deg},
          {"vfov_deg", c.vfov_deg},
          {"kx", c.kx},
          {"ky", c.ky},
          {"alpha", c.alpha},
          {"fallback_threshold", c.fallback_threshold},
          {"step_length", c.step_length},
          {"max_steps", c.max_steps},
          {"stagnation_threshold", c.stagnation_threshold},
          {"stagnation_window", c.stagnation_window},
          {"voxel_size", c.voxel_size},
          {"pixel_stride", c.pixel_stride},
          {"hit_only", c.hit_only},
          {"collision_inflate", c.collision_inflate},
          {"goto_post_rotation", c.goto_post_rotation},
          {"cover_radius", c.cover_radius},
          {"cumulative_paint", c.cumulative_paint},
          {"seed", c.seed},
          {"mode", to_string(c.mode)},
          {"altitude", c.altitude}};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open config {}", path.string()));
  }
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace pixnav
