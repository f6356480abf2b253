#include "pixnav/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include <fmt/format.h>

namespace pixnav {

namespace {

constexpr double kGrid = 0.25;

const Rgb kWallColors[] = {{200, 200, 195}, {150, 160, 170}, {170, 185, 160}, {190, 180, 150}};
const Rgb kFurnitureColors[] = {{70, 110, 180}, {60, 140, 90}, {220, 200, 120}, {140, 110, 80}, {120, 90, 160}};
constexpr Rgb kFloorColor{110, 110, 120};
constexpr Rgb kCeilingColor{235, 235, 235};

// Integer draws through explicit arithmetic so scenes do not depend on the
// standard library's distribution implementations.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  /// lo + k*kGrid for k uniform so the result stays in [lo, hi].
  double snapped(double lo, double hi) {
    return lo + kGrid * uniform_int(0, static_cast<int>(std::floor((hi - lo) / kGrid + 1e-9)));
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T, std::size_t N>
  const T& pick(const T (&items)[N]) {
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(N) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

bool inside_any(const std::vector<FloorRect>& rects, double x, double y) {
  return std::any_of(rects.begin(), rects.end(),
                     [&](const FloorRect& r) { return x > r.x0 && x < r.x1 && y > r.y0 && y < r.y1; });
}

struct Furniture {
  FloorRect footprint;
  double height;
};

// Obstacles standing on the floor inside `room`, kept `margin` away from the
// room's walls and `gap` away from each other.
void place_furniture(SceneRng& rng, const FloorRect& room, int count, double max_height, double margin,
                     std::vector<Furniture>& placed) {
  constexpr double gap = 1.0;
  for (int n = 0, attempts = 0; n < count && attempts < 200; ++attempts) {
    const double w = rng.snapped(0.75, 1.5);
    const double d = rng.snapped(0.75, 1.5);
    const double x_hi = room.x1 - margin - w;
    const double y_hi = room.y1 - margin - d;
    if (x_hi < room.x0 + margin || y_hi < room.y0 + margin) {
      return;
    }
    const double x = rng.snapped(room.x0 + margin, x_hi);
    const double y = rng.snapped(room.y0 + margin, y_hi);
    const FloorRect f{x, y, x + w, y + d};
    const bool clear = std::none_of(placed.begin(), placed.end(), [&](const Furniture& o) {
      return f.x0 < o.footprint.x1 + gap && f.x1 > o.footprint.x0 - gap && f.y0 < o.footprint.y1 + gap &&
             f.y1 > o.footprint.y0 - gap;
    });
    if (!clear) {
      continue;
    }
    placed.push_back({f, rng.snapped(0.75, max_height)});
    ++n;
  }
}

void add_targets(SceneRng& rng, SceneDescription& scene, int count, double height) {
  for (int n = 0, attempts = 0; n < count && attempts < 100000; ++attempts) {
    const Vec3 p{scene.bounds.min.x + rng.unit() * (scene.bounds.max.x - scene.bounds.min.x),
                 scene.bounds.min.y + rng.unit() * (scene.bounds.max.y - scene.bounds.min.y),
                 0.5 + rng.unit() * (height - 1.0)};
    if (!inside_geometry(scene, p) && clearance(scene, p) >= 0.5) {
      scene.targets.push_back(p);
      ++n;
    }
  }
}

SceneDescription finish(SceneDescription scene, SceneRng& rng, const std::vector<Furniture>& furniture, double height) {
  for (const auto& f : furniture) {
    scene.boxes.push_back({{f.footprint.x0, f.footprint.y0, 0.0},
                           {f.footprint.x1, f.footprint.y1, std::min(f.height, height)},
                           rng.pick(kFurnitureColors)});
  }
  add_targets(rng, scene, 5, height);
  validate_scene(scene);
  return scene;
}

}  // namespace

ScenePreset preset_from_string(std::string_view name) {
  for (auto p : {ScenePreset::corridor, ScenePreset::apartment, ScenePreset::hall}) {
    if (to_string(p) == name) {
      return p;
    }
  }
  throw DomainError(fmt::format("unknown scene preset '{}'", name));
}

std::string_view to_string(ScenePreset preset) {
  switch (preset) {
    case ScenePreset::corridor:
      return "corridor";
    case ScenePreset::apartment:
      return "apartment";
    case ScenePreset::hall:
      return "hall";
  }
  return "unknown";
}

SceneDescription build_interior(const std::vector<FloorRect>& free_space, double height, double wall_thickness,
                                std::uint64_t color_seed) {
  if (free_space.empty()) {
    throw SceneError("floor plan has no free space");
  }
  SceneRng rng(color_seed);
  double x0 = free_space[0].x0, y0 = free_space[0].y0, x1 = free_space[0].x1, y1 = free_space[0].y1;
  for (const auto& r : free_space) {
    x0 = std::min(x0, r.x0);
    y0 = std::min(y0, r.y0);
    x1 = std::max(x1, r.x1);
    y1 = std::max(y1, r.y1);
  }
  x0 -= wall_thickness;
  y0 -= wall_thickness;
  x1 += wall_thickness;
  y1 += wall_thickness;
  const int nx = static_cast<int>(std::lround((x1 - x0) / wall_thickness));
  const int ny = static_cast<int>(std::lround((y1 - y0) / wall_thickness));

  SceneDescription scene;
  scene.bounds = {{x0, y0, -wall_thickness}, {x1, y1, height + wall_thickness}, {}};
  scene.boxes.push_back({{x0, y0, -wall_thickness}, {x1, y1, 0.0}, kFloorColor});
  scene.boxes.push_back({{x0, y0, height}, {x1, y1, height + wall_thickness}, kCeilingColor});

  // Sweep rows; identical solid runs on consecutive rows grow one box.
  std::map<std::pair<int, int>, int> open;  // run [a, b) -> first row
  auto emit = [&](int a, int b, int row0, int row1) {
    scene.boxes.push_back({{x0 + a * wall_thickness, y0 + row0 * wall_thickness, 0.0},
                           {x0 + b * wall_thickness, y0 + row1 * wall_thickness, height},
                           rng.pick(kWallColors)});
  };
  for (int j = 0; j <= ny; ++j) {
    std::map<std::pair<int, int>, int> next;
    if (j < ny) {
      const double cy = y0 + (j + 0.5) * wall_thickness;
      for (int i = 0; i < nx;) {
        if (inside_any(free_space, x0 + (i + 0.5) * wall_thickness, cy)) {
          ++i;
          continue;
        }
        int k = i;
        while (k < nx && !inside_any(free_space, x0 + (k + 0.5) * wall_thickness, cy)) {
          ++k;
        }
        const auto it = open.find({i, k});
        next[{i, k}] = it != open.end() ? it->second : j;
        i = k;
      }
    }
    for (const auto& [run, row0] : open) {
      if (!next.contains(run)) {
        emit(run.first, run.second, row0, j);
      }
    }
    open = std::move(next);
  }
  return scene;
}

SceneDescription generate_scene(ScenePreset preset, std::uint64_t seed) {
  SceneRng rng(seed);
  switch (preset) {
    case ScenePreset::corridor: {
      // L-shaped corridor: a leg along +x, then a leg turning toward +y.
      const double width = rng.snapped(2.0, 3.0);
      const double leg_a = rng.snapped(10.0, 13.0);
      const double leg_b = rng.snapped(8.0, 11.0);
      const double height = 3.0;
      const std::vector<FloorRect> plan{{0.0, 0.0, leg_a, width}, {leg_a - width, 0.0, leg_a, leg_b}};
      SceneDescription scene = build_interior(plan, height, kGrid, seed ^ 0xC0FFEEULL);
      scene.name = fmt::format("corridor-{}", seed);
      return finish(std::move(scene), rng, {}, height);
    }
    case ScenePreset::apartment: {
      const double room_a = rng.snapped(8.0, 10.0);
      const double room_b = rng.snapped(8.0, 10.0);
      const double depth = rng.snapped(8.0, 10.0);
      const double door = rng.snapped(1.5, depth - 3.0);
      const double height = 3.0;
      const double wall_x = room_a;
      const FloorRect a{0.0, 0.0, room_a, depth};
      const FloorRect b{wall_x + kGrid, 0.0, wall_x + kGrid + room_b, depth};
      const std::vector<FloorRect> plan{a, b, {wall_x, door, wall_x + kGrid, door + 1.5}};
      SceneDescription scene = build_interior(plan, height, kGrid, seed ^ 0xC0FFEEULL);
      scene.name = fmt::format("apartment-{}", seed);
      std::vector<Furniture> furniture;
      place_furniture(rng, a, 2, 2.0, 1.0, furniture);
      place_furniture(rng, b, 2, 2.0, 1.0, furniture);
      return finish(std::move(scene), rng, furniture, height);
    }
    case ScenePreset::hall: {
      const double w = rng.snapped(13.0, 15.0);
      const double d = rng.snapped(10.0, 12.0);
      const double height = 4.0;
      const FloorRect room{0.0, 0.0, w, d};
      SceneDescription scene = build_interior({room}, height, kGrid, seed ^ 0xC0FFEEULL);
      scene.name = fmt::format("hall-{}", seed);
      std::vector<Furniture> clutter;
      place_furniture(rng, room, 10, height, 1.0, clutter);
      return finish(std::move(scene), rng, clutter, height);
    }
  }
  throw DomainError("unknown scene preset");
}

}  // namespace pixnav
