#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pixnav/scene.hpp"

namespace pixnav {

enum class ScenePreset { corridor, apartment, hall };

ScenePreset preset_from_string(std::string_view name);
std::string_view to_string(ScenePreset preset);

/// Axis-aligned floor-plan rectangle of free space, scene units.
struct FloorRect {
  double x0, y0, x1, y1;
};

/// Closed interior from a floor plan: floor and ceiling slabs plus solid fill
/// of every wall_thickness-sized column not covered by a free rectangle,
/// merged into as few boxes as a greedy row sweep allows. Coordinates should
/// be multiples of wall_thickness.
SceneDescription build_interior(const std::vector<FloorRect>& free_space, double height, double wall_thickness,
                                std::uint64_t color_seed);

/// Deterministic procedural scene: identical (preset, seed) pairs yield
/// identical scenes. Rooms span 8 to 15 units.
SceneDescription generate_scene(ScenePreset preset, std::uint64_t seed);

}  // namespace pixnav
