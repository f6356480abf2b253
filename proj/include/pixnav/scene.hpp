#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixnav/color.hpp"
#include "pixnav/geometry.hpp"
#include "pixnav/image.hpp"

namespace pixnav {

class PaintStore;

struct AABox {
  Vec3 min;
  Vec3 max;
  Rgb color{128, 128, 128};

  /// Strict interior.
  bool contains(const Vec3& p) const;
  bool contains_closed(const Vec3& p) const;
  /// Euclidean distance from p to the closed box; 0 inside.
  double distance_to(const Vec3& p) const;
  AABox inflated(double margin) const;
  double volume() const;
};

struct SceneDescription {
  std::string name;
  AABox bounds;
  std::vector<AABox> boxes;
  std::vector<Vec3> targets;
  double distance_unit = 1.0;
};

struct RayHit {
  double distance = 0.0;
  Vec3 point;
  int surface_id = -1;  // box index * 6 + face, faces ordered -x, +x, -y, +y, -z, +z
  Rgb color;

  int box() const { return surface_id / 6; }
  int face() const { return surface_id % 6; }
};

inline constexpr double kSelfIntersectionEpsilon = 1e-6;

/// Nearest box surface along a unit ray, farther than kSelfIntersectionEpsilon
/// and no farther than kFarPlane.
std::optional<RayHit> cast_ray(const SceneDescription& scene, const Vec3& origin, const Vec3& dir);

/// True when p lies strictly inside any box.
bool inside_geometry(const SceneDescription& scene, const Vec3& p);

/// Distance from p to the nearest box (0 when inside one).
double clearance(const SceneDescription& scene, const Vec3& p);

/// True when segment a-b touches any box grown by `inflate` on every side.
bool segment_collides(const SceneDescription& scene, const Vec3& a, const Vec3& b, double inflate = 0.0);

DepthImage render_depth(const SceneDescription& scene, const Pose& pose, const CameraIntrinsics& k);

struct RenderOptions {
  /// Uniform per-channel color noise in [-jitter, jitter], applied to surface
  /// pixels only. Stands in for the simulator's visual effects.
  int jitter = 0;
  std::uint64_t jitter_seed = 0;
};

/// Flat-shaded color render. Surfaces already covered by paint render as
/// kPaintRed; misses render as kBackground.
ColorImage render_color(const SceneDescription& scene, const PaintStore& paint, const Pose& pose,
                        const CameraIntrinsics& k, const RenderOptions& options = {});

/// Minimum CIE76 distance a scene color must keep from the paint color, for
/// the default classification threshold of 65 plus a 10 unit margin.
inline constexpr double kReservedPaintMargin = 75.0;

/// Throws SceneError describing the first violated invariant.
void validate_scene(const SceneDescription& scene);

SceneDescription scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const SceneDescription& scene);
SceneDescription load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const SceneDescription& scene);

}  // namespace pixnav
