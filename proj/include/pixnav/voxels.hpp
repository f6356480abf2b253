#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pixnav/geometry.hpp"
#include "pixnav/image.hpp"
#include "pixnav/scene.hpp"

namespace pixnav {

struct VoxelIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  bool operator==(const VoxelIndex&) const = default;
};

/// Regular grid of seen/occupied flags over the scene bounds.
class VoxelGrid {
 public:
  VoxelGrid(const Vec3& origin, double voxel_size, std::array<int, 3> dims);

  /// Grid covering the scene bounds, occupancy from the boxes (a voxel is
  /// occupied when it overlaps a box with positive volume).
  static VoxelGrid for_scene(const SceneDescription& scene, double voxel_size = 0.25);

  const Vec3& origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t voxel_count() const { return seen_.size(); }

  bool in_grid(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims_[0] && y < dims_[1] && z < dims_[2];
  }
  std::size_t linear(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * dims_[1] + y) * dims_[0] + x;
  }
  VoxelIndex unlinear(std::size_t i) const;

  bool seen(std::size_t i) const { return seen_[i] != 0; }
  bool occupied(std::size_t i) const { return occupied_[i] != 0; }
  /// Returns true when the voxel flipped from unseen to seen.
  bool mark_seen(std::size_t i) {
    if (seen_[i] != 0) {
      return false;
    }
    seen_[i] = 1;
    ++seen_count_;
    return true;
  }
  void set_occupied(std::size_t i, bool value) { occupied_[i] = value ? 1 : 0; }
  std::size_t seen_count() const { return seen_count_; }

  AABox voxel_box(int x, int y, int z) const;
  AABox extent() const;

 private:
  Vec3 origin_;
  double voxel_size_;
  std::array<int, 3> dims_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint8_t> occupied_;
  std::size_t seen_count_ = 0;
};

/// Amanatides-Woo traversal of the voxels pierced by segment a-b (clipped to
/// the grid), in order. visit(linear_index) is called once per voxel.
template <typename Visit>
void trace_segment(const VoxelGrid& grid, const Vec3& a, const Vec3& b, Visit&& visit) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Vec3 d = b - a;
  const AABox box = grid.extent();
  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (a[axis] < box.min[axis] || a[axis] > box.max[axis]) {
        return;
      }
      continue;
    }
    double ta = (box.min[axis] - a[axis]) / d[axis];
    double tb = (box.max[axis] - a[axis]) / d[axis];
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) {
      return;
    }
  }
  const double size = grid.voxel_size();
  const auto& dims = grid.dims();
  const Vec3 start = a + d * t0;
  std::array<int, 3> cell{};
  std::array<int, 3> step{};
  std::array<double, 3> t_max{};
  std::array<double, 3> t_delta{};
  for (int axis = 0; axis < 3; ++axis) {
    const double local = (start[axis] - grid.origin()[axis]) / size;
    cell[axis] = std::clamp(static_cast<int>(std::floor(local)), 0, dims[axis] - 1);
    if (d[axis] > 0.0) {
      step[axis] = 1;
      t_max[axis] = (grid.origin()[axis] + (cell[axis] + 1) * size - a[axis]) / d[axis];
      t_delta[axis] = size / d[axis];
    } else if (d[axis] < 0.0) {
      step[axis] = -1;
      t_max[axis] = (grid.origin()[axis] + cell[axis] * size - a[axis]) / d[axis];
      t_delta[axis] = -size / d[axis];
    } else {
      step[axis] = 0;
      t_max[axis] = inf;
      t_delta[axis] = inf;
    }
  }
  while (true) {
    visit(grid.linear(cell[0], cell[1], cell[2]));
    int axis = 0;
    if (t_max[1] < t_max[axis]) {
      axis = 1;
    }
    if (t_max[2] < t_max[axis]) {
      axis = 2;
    }
    if (t_max[axis] > t1) {
      return;
    }
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= dims[axis]) {
      return;
    }
    t_max[axis] += t_delta[axis];
  }
}

struct SeenUpdateOptions {
  int pixel_stride = 2;   // trace every n-th pixel along both axes
  bool hit_only = false;  // mark only the voxel behind each hit, not the free voxels on the way
};

/// Distance past a surface hit used to land inside the hit voxel.
inline constexpr double kHitVoxelNudge = 1e-4;

/// Marks voxels seen from a capture: every voxel a pixel ray passes through
/// up to its hit point, plus the voxel just behind the hit surface. Returns
/// the number of voxels that flipped to seen.
std::size_t update_seen(VoxelGrid& grid, const Pose& pose, const DepthImage& depth, const CameraIntrinsics& k,
                        const SeenUpdateOptions& options = {});

/// Occupied voxels with at least one unoccupied (or out-of-grid) face neighbor.
std::vector<std::size_t> surface_voxels(const VoxelGrid& grid);

/// Share of surface voxels seen, in percent. 0 when there are no surface voxels.
double surface_seen_percent(const VoxelGrid& grid);

/// Closest approach of a path (start position included) to a target.
double min_distance_to_target(std::span<const Vec3> path, const Vec3& target);

}  // namespace pixnav
