#include "pixnav/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "pixnav/painting.hpp"
#include "pixnav/parallel.hpp"

namespace pixnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReservedBackgroundMargin = 20.0;

struct SlabSpan {
  double t_near = -kInf;
  double t_far = kInf;
  int near_face = -1;
  int far_face = -1;
};

// Parametric overlap of the line o + t*d with a closed box. Divisions, not
// reciprocal multiplies, so distances match a per-face plane intersection.
bool slab_span(const AABox& box, const Vec3& o, const Vec3& d, SlabSpan& span) {
  for (int axis = 0; axis < 3; ++axis) {
    const double da = d[axis];
    const double oa = o[axis];
    if (da == 0.0) {
      if (oa < box.min[axis] || oa > box.max[axis]) {
        return false;
      }
      continue;
    }
    double t0 = (box.min[axis] - oa) / da;
    double t1 = (box.max[axis] - oa) / da;
    int f0 = 2 * axis;
    int f1 = 2 * axis + 1;
    if (t0 > t1) {
      std::swap(t0, t1);
      std::swap(f0, f1);
    }
    if (t0 > span.t_near) {
      span.t_near = t0;
      span.near_face = f0;
    }
    if (t1 < span.t_far) {
      span.t_far = t1;
      span.far_face = f1;
    }
    if (span.t_near > span.t_far) {
      return false;
    }
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rgb jittered(Rgb c, int jitter, std::uint64_t seed, std::size_t pixel) {
  if (jitter <= 0) {
    return c;
  }
  std::uint64_t h = splitmix64(seed ^ splitmix64(pixel));
  auto shift = [&](std::uint8_t v) {
    const int span = 2 * jitter + 1;
    const int offset = static_cast<int>(h % static_cast<std::uint64_t>(span)) - jitter;
    h = splitmix64(h);
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + offset, 0, 255));
  };
  const std::uint8_t r = shift(c.r);
  const std::uint8_t g = shift(c.g);
  const std::uint8_t b = shift(c.b);
  return {r, g, b};
}

void require_pose_outside_geometry(const SceneDescription& scene, const Pose& pose) {
  if (inside_geometry(scene, pose.position)) {
    throw InvalidPoseError(fmt::format("camera at ({}, {}, {}) is inside scene geometry", pose.position.x,
                                       pose.position.y, pose.position.z));
  }
}

// Rays through every pixel center, in world orientation.
std::vector<Vec3> world_rays(const Pose& pose, const CameraIntrinsics& k) {
  std::vector<Vec3> rays(static_cast<std::size_t>(k.pixel_count()));
  for (int y = 0; y < k.height(); ++y) {
    for (int x = 0; x < k.width(); ++x) {
      rays[static_cast<std::size_t>(y) * k.width() + x] =
          camera_to_world(back_project({static_cast<double>(x), static_cast<double>(y)}, k), pose);
    }
  }
  return rays;
}

Vec3 vec_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw SceneError(fmt::format("{} must be an array of 3 numbers", what));
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec_to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

}  // namespace

bool AABox::contains(const Vec3& p) const {
  return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y && p.z > min.z && p.z < max.z;
}

bool AABox::contains_closed(const Vec3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

double AABox::distance_to(const Vec3& p) const {
  const double dx = std::max({min.x - p.x, 0.0, p.x - max.x});
  const double dy = std::max({min.y - p.y, 0.0, p.y - max.y});
  const double dz = std::max({min.z - p.z, 0.0, p.z - max.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

AABox AABox::inflated(double margin) const {
  const Vec3 m{margin, margin, margin};
  return {min - m, max + m, color};
}

double AABox::volume() const { return (max.x - min.x) * (max.y - min.y) * (max.z - min.z); }

std::optional<RayHit> cast_ray(const SceneDescription& scene, const Vec3& origin, const Vec3& dir) {
  const double len = norm(dir);
  if (!(len > 0.0)) {
    throw DomainError("ray direction has zero length");
  }
  double best = kInf;
  int best_surface = -1;
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    SlabSpan span;
    if (!slab_span(scene.boxes[i], origin, dir, span)) {
      continue;
    }
    double t = span.t_near;
    int face = span.near_face;
    if (!(t > kSelfIntersectionEpsilon)) {
      t = span.t_far;
      face = span.far_face;
    }
    if (t > kSelfIntersectionEpsilon && t < best && face >= 0) {
      best = t;
      best_surface = static_cast<int>(i) * 6 + face;
    }
  }
  if (best_surface < 0 || best > kFarPlane) {
    return std::nullopt;
  }
  RayHit hit;
  hit.distance = best;
  hit.point = origin + dir * best;
  hit.surface_id = best_surface;
  hit.color = scene.boxes[static_cast<std::size_t>(best_surface / 6)].color;
  return hit;
}

bool inside_geometry(const SceneDescription& scene, const Vec3& p) {
  return std::any_of(scene.boxes.begin(), scene.boxes.end(), [&](const AABox& b) { return b.contains(p); });
}

double clearance(const SceneDescription& scene, const Vec3& p) {
  double best = kInf;
  for (const auto& b : scene.boxes) {
    best = std::min(best, b.distance_to(p));
  }
  return best;
}

bool segment_collides(const SceneDescription& scene, const Vec3& a, const Vec3& b, double inflate) {
  const Vec3 d = b - a;
  for (const auto& box : scene.boxes) {
    const AABox grown = box.inflated(inflate);
    SlabSpan span;
    if (slab_span(grown, a, d, span) && span.t_far >= 0.0 && span.t_near <= 1.0) {
      return true;
    }
  }
  return false;
}

DepthImage render_depth(const SceneDescription& scene, const Pose& pose, const CameraIntrinsics& k) {
  require_pose_outside_geometry(scene, pose);
  const auto rays = world_rays(pose, k);
  DepthImage depth(k.width(), k.height(), kFarPlane);
  parallel_for(static_cast<std::size_t>(k.height()), [&](std::size_t y) {
    for (int x = 0; x < k.width(); ++x) {
      const std::size_t i = depth.index(x, static_cast<int>(y));
      if (auto hit = cast_ray(scene, pose.position, rays[i])) {
        depth[i] = hit->distance;
      }
    }
  });
  return depth;
}

ColorImage render_color(const SceneDescription& scene, const PaintStore& paint, const Pose& pose,
                        const CameraIntrinsics& k, const RenderOptions& options) {
  require_pose_outside_geometry(scene, pose);
  const auto rays = world_rays(pose, k);
  ColorImage image(k.width(), k.height(), kBackground);
  parallel_for(static_cast<std::size_t>(k.height()), [&](std::size_t y) {
    std::uint32_t hint = std::numeric_limits<std::uint32_t>::max();
    for (int x = 0; x < k.width(); ++x) {
      const std::size_t i = image.index(x, static_cast<int>(y));
      if (auto hit = cast_ray(scene, pose.position, rays[i])) {
        const Rgb base = paint.is_seen(hit->point, hint) ? kPaintRed : hit->color;
        image[i] = jittered(base, options.jitter, options.jitter_seed, i);
      }
    }
  });
  return image;
}

void validate_scene(const SceneDescription& scene) {
  const AABox& bounds = scene.bounds;
  if (!(bounds.min.x < bounds.max.x && bounds.min.y < bounds.max.y && bounds.min.z < bounds.max.z)) {
    throw SceneError("scene bounds must have positive extent");
  }
  if (scene.distance_unit != 1.0) {
    throw SceneError("distance_unit must be 1.0");
  }
  const Lab red = srgb_to_lab(kPaintRed);
  const Lab black = srgb_to_lab(kBackground);
  double box_volume = 0.0;
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    const AABox& b = scene.boxes[i];
    if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z)) {
      throw SceneError(fmt::format("box {} has non-positive extent", i));
    }
    if (!bounds.contains_closed(b.min) || !bounds.contains_closed(b.max)) {
      throw SceneError(fmt::format("box {} lies outside the scene bounds", i));
    }
    const Lab lab = srgb_to_lab(b.color);
    if (delta_e76(lab, red) < kReservedPaintMargin) {
      throw SceneError(fmt::format("box {} color ({}, {}, {}) is too close to the paint color", i, b.color.r,
                                   b.color.g, b.color.b));
    }
    if (delta_e76(lab, black) < kReservedBackgroundMargin) {
      throw SceneError(fmt::format("box {} color is too close to the background color", i));
    }
    box_volume += b.volume();
  }
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const Vec3& t = scene.targets[i];
    if (!bounds.contains_closed(t) || inside_geometry(scene, t)) {
      throw SceneError(fmt::format("target {} is not in free space", i));
    }
  }
  if (box_volume >= bounds.volume()) {
    // Overlapping boxes can still leave gaps; probe a coarse lattice.
    constexpr double step = 0.25;
    bool found = false;
    for (double x = bounds.min.x + step / 2; x < bounds.max.x && !found; x += step) {
      for (double y = bounds.min.y + step / 2; y < bounds.max.y && !found; y += step) {
        for (double z = bounds.min.z + step / 2; z < bounds.max.z && !found; z += step) {
          found = !inside_geometry(scene, {x, y, z});
        }
      }
    }
    if (!found) {
      throw SceneError("scene has no free space");
    }
  }
}

SceneDescription scene_from_json(const nlohmann::json& doc) {
  SceneDescription scene;
  try {
    scene.name = doc.value("name", std::string("unnamed"));
    scene.distance_unit = doc.value("distance_unit", 1.0);
    const auto& bounds = doc.at("bounds");
    scene.bounds.min = vec_from_json(bounds.at("min"), "bounds.min");
    scene.bounds.max = vec_from_json(bounds.at("max"), "bounds.max");
    for (const auto& jb : doc.at("boxes")) {
      AABox b;
      b.min = vec_from_json(jb.at("min"), "box.min");
      b.max = vec_from_json(jb.at("max"), "box.max");
      const auto& c = jb.at("color");
      if (!c.is_array() || c.size() != 3) {
        throw SceneError("box.color must be [r, g, b]");
      }
      std::array<int, 3> channels{};
      for (int i = 0; i < 3; ++i) {
        channels[i] = c[i].get<int>();
        if (channels[i] < 0 || channels[i] > 255) {
          throw SceneError("color channels must lie in 0..255");
        }
      }
      b.color = {static_cast<std::uint8_t>(channels[0]), static_cast<std::uint8_t>(channels[1]),
                 static_cast<std::uint8_t>(channels[2])};
      scene.boxes.push_back(b);
    }
    for (const auto& jt : doc.value("targets", nlohmann::json::array())) {
      scene.targets.push_back(vec_from_json(jt, "target"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(fmt::format("malformed scene document: {}", e.what()));
  }
  validate_scene(scene);
  return scene;
}

nlohmann::json scene_to_json(const SceneDescription& scene) {
  nlohmann::json doc;
  doc["name"] = scene.name;
  doc["distance_unit"] = scene.distance_unit;
  doc["bounds"] = {{"min", vec_to_json(scene.bounds.min)}, {"max", vec_to_json(scene.bounds.max)}};
  auto boxes = nlohmann::json::array();
  for (const auto& b : scene.boxes) {
    boxes.push_back({{"min", vec_to_json(b.min)},
                     {"max", vec_to_json(b.max)},
                     {"color", {b.color.r, b.color.g, b.color.b}}});
  }
  doc["boxes"] = std::move(boxes);
  auto targets = nlohmann::json::array();
  for (const auto& t : scene.targets) {
    targets.push_back(vec_to_json(t));
  }
  doc["targets"] = std::move(targets);
  return doc;
}

SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SceneError(fmt::format("cannot open scene file {}", path.string()));
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return scene_from_json(doc);
}

void save_scene(const std::filesystem::path& path, const SceneDescription& scene) {
  std::ofstream out(path);
  if (!out) {
    throw IoError(fmt::format("cannot write {}", path.string()));
  }
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace pixnav
