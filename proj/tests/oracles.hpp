#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "pixnav/image.hpp"
#include "pixnav/painting.hpp"
#include "pixnav/scene.hpp"
#include "pixnav/voxels.hpp"

namespace pixnav::testing {

// Lattice triangle ids whose edges carry a depth difference above the exact
// nearest-rank 96th percentile, computed by sorting.
inline std::vector<std::uint32_t> oracle_dropped(const DepthImage& d) {
  const int w = d.width(), h = d.height();
  auto valid = [&](int x, int y) { return d(x, y) < kFarPlane; };
  auto diff = [&](int x0, int y0, int x1, int y1) { return std::abs(d(x0, y0) - d(x1, y1)); };
  std::vector<double> edges;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!valid(x, y)) continue;
      if (x + 1 < w && valid(x + 1, y)) edges.push_back(diff(x, y, x + 1, y));
      if (y + 1 < h && valid(x, y + 1)) edges.push_back(diff(x, y, x, y + 1));
      if (x + 1 < w && y + 1 < h && valid(x + 1, y + 1)) edges.push_back(diff(x, y, x + 1, y + 1));
    }
  }
  std::vector<std::uint32_t> out;
  if (edges.empty()) return out;
  std::sort(edges.begin(), edges.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.96 * edges.size() - 1e-9));
  const double cutoff = edges[std::max<std::size_t>(rank, 1) - 1];
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const std::uint32_t id = 2u * static_cast<std::uint32_t>(y * (w - 1) + x);
      // upper {(x,y),(x+1,y),(x+1,y+1)}
      if (valid(x, y) && valid(x + 1, y) && valid(x + 1, y + 1)) {
        if (diff(x, y, x + 1, y) > cutoff || diff(x + 1, y, x + 1, y + 1) > cutoff ||
            diff(x, y, x + 1, y + 1) > cutoff) {
          out.push_back(id);
        }
      }
      // lower {(x,y),(x+1,y+1),(x,y+1)}
      if (valid(x, y) && valid(x + 1, y + 1) && valid(x, y + 1)) {
        if (diff(x, y, x + 1, y + 1) > cutoff || diff(x, y, x, y + 1) > cutoff ||
            diff(x, y + 1, x + 1, y + 1) > cutoff) {
          out.push_back(id + 1);
        }
      }
    }
  }
  return out;
}

// Closed box vs segment a-b (parameter in [0, 1]), by slabs.
inline bool segment_touches(const AABox& box, const Vec3& a, const Vec3& b) {
  double t0 = 0.0, t1 = 1.0;
  const Vec3 d = b - a;
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (a[axis] < box.min[axis] || a[axis] > box.max[axis]) return false;
      continue;
    }
    double ta = (box.min[axis] - a[axis]) / d[axis];
    double tb = (box.max[axis] - a[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

inline std::set<std::size_t> brute_force_voxels(const VoxelGrid& g, const Vec3& a, const Vec3& b) {
  std::set<std::size_t> out;
  const auto& dims = g.dims();
  for (int z = 0; z < dims[2]; ++z)
    for (int y = 0; y < dims[1]; ++y)
      for (int x = 0; x < dims[0]; ++x)
        if (segment_touches(g.voxel_box(x, y, z), a, b)) out.insert(g.linear(x, y, z));
  return out;
}

// Straight 3x3 correlation with clamped (replicated) borders.
inline void naive_sobel(const DepthImage& d, Image<double>& gx, Image<double>& gy) {
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int w = d.width(), h = d.height();
  auto at = [&](int x, int y) { return d(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sx = 0, sy = 0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          sx += kx[j + 1][i + 1] * at(x + i, y + j);
          sy += kx[i + 1][j + 1] * at(x + i, y + j);
        }
      }
      gx(x, y) = sx;
      gy(x, y) = sy;
    }
  }
}

/// Wall at x = 0.5 with a doorway, seen from x < 0.5 facing +x. Nothing lies
/// beyond the wall, so rays through the doorway miss.
inline SceneDescription doorway_scene() {
  SceneDescription s;
  s.name = "wall-door";
  s.bounds = {{-2, -6, -0.25}, {30, 6, 4}, {}};
  const Rgb gray{150, 150, 150};
  s.boxes = {{{0.5, -6, 0}, {0.75, -0.5, 4}, gray},
             {{0.5, 0.5, 0}, {0.75, 6, 4}, gray},
             {{0.5, -0.5, 2.5}, {0.75, 0.5, 4}, gray},  // lintel
             {{-2, -6, -0.25}, {0.5, 6, 0}, gray},      // floor up to the wall
             {{-2, -6, 3.9}, {0.5, 6, 4}, gray}};
  return s;
}

inline const Pose kDoorwayPose{{-0.5, 0.0, 1.2}, 0.0};

/// Whether the ray from `pose` through `px` crosses the doorway opening.
inline bool through_doorway(const PixelCoord& px, const Pose& pose, const CameraIntrinsics& k) {
  const Vec3 d = camera_to_world(back_project(px, k), pose);
  if (d.x <= 0.0) return false;
  const Vec3 hit = pose.position + d * ((0.5 - pose.position.x) / d.x);
  return hit.y > -0.5 && hit.y < 0.5 && hit.z > 0.0 && hit.z < 2.5;
}

}  // namespace pixnav::testing
