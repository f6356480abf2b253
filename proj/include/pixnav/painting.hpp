#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "pixnav/geometry.hpp"
#include "pixnav/image.hpp"

namespace pixnav {

/// World-frame reconstruction of a depth capture: one point per non-miss pixel.
struct PointCloud {
  int width = 0;
  int height = 0;
  std::vector<Vec3> points;
  std::vector<std::int32_t> point_of_pixel;  // -1 for misses

  std::size_t size() const { return points.size(); }
};

PointCloud backproject_depth(const DepthImage& depth, const Pose& pose, const CameraIntrinsics& k);

using TriangleIndices = std::array<std::uint32_t, 3>;

/// The depth lattice split into two triangles per 2x2 cell along the
/// top-left to bottom-right diagonal. Cell (x, y) owns triangle 2*(y*(W-1)+x)
/// = {(x,y), (x+1,y), (x+1,y+1)} and the next id = {(x,y), (x+1,y+1), (x,y+1)}.
struct Triangulation {
  std::vector<Vec3> vertices;                // the cloud's points
  std::vector<TriangleIndices> kept;         // indices into vertices
  std::vector<std::uint32_t> loose;          // vertices of dropped triangles, each once
  std::vector<std::uint32_t> dropped_ids;    // lattice triangle ids, ascending
  std::size_t edge_count = 0;                // edges with two valid endpoints
  std::size_t suspicious_edges = 0;
  double cutoff = 0.0;                       // nearest-rank percentile of edge depth differences
};

inline constexpr double kSuspiciousFraction = 0.04;

/// Edges whose absolute depth difference exceeds the (1 - drop_fraction)
/// nearest-rank percentile are suspicious; triangles holding one are dropped
/// and only their vertices are kept. Triangles touching a miss are skipped.
Triangulation triangulate_and_filter(const PointCloud& cloud, const DepthImage& depth,
                                     double drop_fraction = kSuspiciousFraction);

/// Nearest-rank percentile: the ceil(q*n)-th smallest value, q in (0, 1].
double nearest_rank_percentile(std::vector<double> values, double q);

/// Squared distance from p to the closed triangle abc.
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Accumulated "already seen" geometry with a uniform hash grid for coverage
/// queries. Single writer; concurrent is_seen calls are safe between paints.
class PaintStore {
 public:
  explicit PaintStore(double cover_radius = 0.05, double cell_size = 0.1);

  void paint(std::span<const Vec3> vertices, std::span<const TriangleIndices> triangles,
             std::span<const std::uint32_t> loose_points);
  void paint(const Triangulation& t) { paint(t.vertices, t.kept, t.loose); }

  /// Within cover_radius of any stored triangle or loose point.
  bool is_seen(const Vec3& p) const;
  /// Same answer; `hint` remembers the last covering primitive, which
  /// neighboring queries (adjacent pixels) usually hit first.
  bool is_seen(const Vec3& p, std::uint32_t& hint) const;

  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t point_count() const { return points_.size(); }
  bool empty() const { return triangles_.empty() && points_.empty(); }
  double cover_radius() const { return cover_radius_; }

  std::array<Vec3, 3> triangle(std::size_t i) const;
  Vec3 point(std::size_t i) const;

  /// Binary dump: magic "PXNPAINT", uint64 triangle count, uint64 point count,
  /// then float32 xyz triples for every triangle vertex followed by the points.
  void dump(const std::filesystem::path& path) const;

 private:
  using Float3 = std::array<float, 3>;
  static constexpr std::uint32_t kPointTag = 0x80000000u;

  std::uint32_t add_vertex(const Vec3& v);
  Vec3 vertex(std::uint32_t i) const;
  std::uint64_t cell_key(int x, int y, int z) const;
  int cell_coord(double v) const;
  void insert(std::uint32_t entry, const Vec3& lo, const Vec3& hi);
  bool covers(std::uint32_t entry, const Vec3& p) const;

  double cover_radius_;
  double cell_size_;
  std::vector<Float3> vertices_;
  std::vector<TriangleIndices> triangles_;
  std::vector<std::uint32_t> points_;
  std::vector<std::array<float, 6>> tri_bounds_;  // padded by the cover radius
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

/// Reconstruct, triangulate and paint one capture.
Triangulation paint_view(PaintStore& store, const DepthImage& depth, const Pose& pose, const CameraIntrinsics& k);

}  // namespace pixnav
