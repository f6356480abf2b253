#include "pixnav/voxels.hpp"

#include <fmt/format.h>

namespace pixnav {

VoxelGrid::VoxelGrid(const Vec3& origin, double voxel_size, std::array<int, 3> dims)
    : origin_(origin), voxel_size_(voxel_size), dims_(dims) {
  if (!(voxel_size > 0.0) || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
    throw DomainError("voxel grid needs a positive voxel size and dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  seen_.assign(n, 0);
  occupied_.assign(n, 0);
}

VoxelGrid VoxelGrid::for_scene(const SceneDescription& scene, double voxel_size) {
  const Vec3 extent = scene.bounds.max - scene.bounds.min;
  // Tolerance keeps an extent that is an exact multiple of the voxel size
  // from growing an extra layer.
  auto cells = [voxel_size](double len) { return std::max(1, static_cast<int>(std::ceil(len / voxel_size - 1e-9))); };
  VoxelGrid grid(scene.bounds.min, voxel_size, {cells(extent.x), cells(extent.y), cells(extent.z)});
  for (const auto& box : scene.boxes) {
    // Voxels overlapping the box with positive volume.
    int lo[3];
    int hi[3];
    for (int axis = 0; axis < 3; ++axis) {
      const double a = (box.min[axis] - grid.origin_[axis]) / voxel_size;
      const double b = (box.max[axis] - grid.origin_[axis]) / voxel_size;
      lo[axis] = std::max(0, static_cast<int>(std::floor(a + 1e-9)));
      hi[axis] = std::min(grid.dims_[axis] - 1, static_cast<int>(std::ceil(b - 1e-9)) - 1);
    }
    for (int z = lo[2]; z <= hi[2]; ++z) {
      for (int y = lo[1]; y <= hi[1]; ++y) {
        for (int x = lo[0]; x <= hi[0]; ++x) {
          grid.occupied_[grid.linear(x, y, z)] = 1;
        }
      }
    }
  }
  return grid;
}

VoxelIndex VoxelGrid::unlinear(std::size_t i) const {
  const auto nx = static_cast<std::size_t>(dims_[0]);
  const auto ny = static_cast<std::size_t>(dims_[1]);
  return {static_cast<int>(i % nx), static_cast<int>((i / nx) % ny), static_cast<int>(i / (nx * ny))};
}

AABox VoxelGrid::voxel_box(int x, int y, int z) const {
  const Vec3 lo = origin_ + Vec3{x * voxel_size_, y * voxel_size_, z * voxel_size_};
  return {lo, lo + Vec3{voxel_size_, voxel_size_, voxel_size_}, {}};
}

AABox VoxelGrid::extent() const {
  return {origin_, origin_ + Vec3{dims_[0] * voxel_size_, dims_[1] * voxel_size_, dims_[2] * voxel_size_}, {}};
}

std::size_t update_seen(VoxelGrid& grid, const Pose& pose, const DepthImage& depth, const CameraIntrinsics& k,
                        const SeenUpdateOptions& options) {
  if (depth.width() != k.width() || depth.height() != k.height()) {
    throw DomainError("depth image does not match the camera");
  }
  if (options.pixel_stride <= 0) {
    throw DomainError("pixel stride must be positive");
  }
  std::size_t flipped = 0;
  auto mark = [&](std::size_t i) {
    if (grid.mark_seen(i)) {
      ++flipped;
    }
  };
  const double diagonal = norm(grid.extent().max - grid.extent().min);
  for (int y = 0; y < k.height(); y += options.pixel_stride) {
    for (int x = 0; x < k.width(); x += options.pixel_stride) {
      const Vec3 ray = camera_to_world(back_project({static_cast<double>(x), static_cast<double>(y)}, k), pose);
      const double d = depth(x, y);
      const bool hit = d < kFarPlane;
      if (hit && options.hit_only) {
        const Vec3 behind = pose.position + ray * (d + kHitVoxelNudge);
        trace_segment(grid, behind, behind, mark);
        continue;
      }
      // Misses run until the ray leaves the grid.
      const double length = hit ? d + kHitVoxelNudge : std::min(kFarPlane, diagonal + norm(pose.position - grid.origin()));
      trace_segment(grid, pose.position, pose.position + ray * length, mark);
    }
  }
  return flipped;
}

std::vector<std::size_t> surface_voxels(const VoxelGrid& grid) {
  std::vector<std::size_t> out;
  const auto& dims = grid.dims();
  constexpr int offsets[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
  for (int z = 0; z < dims[2]; ++z) {
    for (int y = 0; y < dims[1]; ++y) {
      for (int x = 0; x < dims[0]; ++x) {
        const std::size_t i = grid.linear(x, y, z);
        if (!grid.occupied(i)) {
          continue;
        }
        for (const auto& o : offsets) {
          const int nx = x + o[0], ny = y + o[1], nz = z + o[2];
          if (!grid.in_grid(nx, ny, nz) || !grid.occupied(grid.linear(nx, ny, nz))) {
            out.push_back(i);
            break;
          }
        }
      }
    }
  }
  return out;
}

double surface_seen_percent(const VoxelGrid& grid) {
  const auto surface = surface_voxels(grid);
  if (surface.empty()) {
    return 0.0;
  }
  std::size_t seen = 0;
  for (auto i : surface) {
    seen += grid.seen(i) ? 1 : 0;
  }
  return 100.0 * static_cast<double>(seen) / static_cast<double>(surface.size());
}

double min_distance_to_target(std::span<const Vec3> path, const Vec3& target) {
  if (path.empty()) {
    throw DomainError("empty path");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : path) {
    best = std::min(best, distance(p, target));
  }
  return best;
}

}  // namespace pixnav
