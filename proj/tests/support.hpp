#pragma once

#include <random>

#include "pixnav/scene.hpp"
#include "pixnav/scene_gen.hpp"

namespace pixnav::testing {

/// Closed empty room [0,w]x[0,d]x[0,h] with 0.25-thick shell.
inline SceneDescription room(double w, double d, double h, std::uint64_t colors = 1) {
  auto s = build_interior({{0.0, 0.0, w, d}}, h, 0.25, colors);
  s.name = "room";
  return s;
}

/// Scene with only bounds and the given boxes (default gray).
inline SceneDescription open_scene(std::vector<AABox> boxes, AABox bounds = {{-50, -50, -50}, {50, 50, 50}, {}}) {
  SceneDescription s;
  s.name = "open";
  s.bounds = bounds;
  s.boxes = std::move(boxes);
  return s;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace pixnav::testing
