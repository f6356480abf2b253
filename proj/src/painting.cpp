#include "pixnav/painting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace pixnav {

PointCloud backproject_depth(const DepthImage& depth, const Pose& pose, const CameraIntrinsics& k) {
  if (depth.width() != k.width() || depth.height() != k.height()) {
    throw DomainError(fmt::format("depth image is {}x{} but the camera is {}x{}", depth.width(), depth.height(),
                                  k.width(), k.height()));
  }
  PointCloud cloud;
  cloud.width = depth.width();
  cloud.height = depth.height();
  cloud.point_of_pixel.assign(depth.size(), -1);
  cloud.points.reserve(depth.size());
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const std::size_t i = depth.index(x, y);
      const double d = depth[i];
      if (!(d < kFarPlane)) {
        continue;
      }
      const Vec3 ray = camera_to_world(back_project({static_cast<double>(x), static_cast<double>(y)}, k), pose);
      cloud.point_of_pixel[i] = static_cast<std::int32_t>(cloud.points.size());
      cloud.points.push_back(pose.position + ray * d);
    }
  }
  return cloud;
}

double nearest_rank_percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw DomainError("percentile of an empty set");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("percentile fraction must lie in (0, 1]");
  }
  const double scaled = q * static_cast<double>(values.size());
  // Tolerance keeps e.g. 0.96 * 25 from rounding up to rank 25.
  auto rank = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

Triangulation triangulate_and_filter(const PointCloud& cloud, const DepthImage& depth, double drop_fraction) {
  const int w = depth.width();
  const int h = depth.height();
  if (cloud.width != w || cloud.height != h) {
    throw DomainError("point cloud and depth image dimensions differ");
  }
  Triangulation out;
  out.vertices = cloud.points;
  if (w < 2 || h < 2) {
    return out;
  }

  constexpr double kInvalid = -1.0;
  auto valid = [&](int x, int y) { return cloud.point_of_pixel[depth.index(x, y)] >= 0; };
  auto diff = [&](int x0, int y0, int x1, int y1) {
    return valid(x0, y0) && valid(x1, y1) ? std::abs(depth(x0, y0) - depth(x1, y1)) : kInvalid;
  };

  // Horizontal (x,y)-(x+1,y), vertical (x,y)-(x,y+1), diagonal (x,y)-(x+1,y+1).
  Image<double> horizontal(w - 1, h, kInvalid);
  Image<double> vertical(w, h - 1, kInvalid);
  Image<double> diagonal(w - 1, h - 1, kInvalid);
  std::vector<double> diffs;
  diffs.reserve(3 * depth.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) {
        horizontal(x, y) = diff(x, y, x + 1, y);
      }
      if (y + 1 < h) {
        vertical(x, y) = diff(x, y, x, y + 1);
      }
      if (x + 1 < w && y + 1 < h) {
        diagonal(x, y) = diff(x, y, x + 1, y + 1);
      }
    }
  }
  for (const auto* edges : {&horizontal, &vertical, &diagonal}) {
    for (double d : edges->data()) {
      if (d != kInvalid) {
        diffs.push_back(d);
      }
    }
  }
  out.edge_count = diffs.size();
  if (diffs.empty()) {
    return out;
  }
  out.cutoff = nearest_rank_percentile(diffs, 1.0 - drop_fraction);
  const double cutoff = out.cutoff;
  out.suspicious_edges = static_cast<std::size_t>(
      std::count_if(diffs.begin(), diffs.end(), [cutoff](double d) { return d > cutoff; }));

  auto suspicious = [cutoff](double d) { return d != kInvalid && d > cutoff; };
  std::vector<char> is_loose(cloud.points.size(), 0);
  auto vertex = [&](int x, int y) { return static_cast<std::uint32_t>(cloud.point_of_pixel[depth.index(x, y)]); };

  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const auto cell = static_cast<std::uint32_t>(2 * (y * (w - 1) + x));
      // {(x,y), (x+1,y), (x+1,y+1)} then {(x,y), (x+1,y+1), (x,y+1)}
      const bool upper_valid = valid(x, y) && valid(x + 1, y) && valid(x + 1, y + 1);
      const bool lower_valid = valid(x, y) && valid(x + 1, y + 1) && valid(x, y + 1);
      const bool diag = suspicious(diagonal(x, y));
      if (upper_valid) {
        const TriangleIndices tri{vertex(x, y), vertex(x + 1, y), vertex(x + 1, y + 1)};
        if (diag || suspicious(horizontal(x, y)) || suspicious(vertical(x + 1, y))) {
          out.dropped_ids.push_back(cell);
          for (auto v : tri) {
            is_loose[v] = 1;
          }
        } else {
          out.kept.push_back(tri);
        }
      }
      if (lower_valid) {
        const TriangleIndices tri{vertex(x, y), vertex(x + 1, y + 1), vertex(x, y + 1)};
        if (diag || suspicious(horizontal(x, y + 1)) || suspicious(vertical(x, y))) {
          out.dropped_ids.push_back(cell + 1);
          for (auto v : tri) {
            is_loose[v] = 1;
          }
        } else {
          out.kept.push_back(tri);
        }
      }
    }
  }
  for (std::size_t v = 0; v < is_loose.size(); ++v) {
    if (is_loose[v] != 0) {
      out.loose.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return out;
}

double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    return dot(ap, ap);
  }
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) {
    return dot(bp, bp);
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 && d1 - d3 > 0.0) {
    const Vec3 q = a + ab * (d1 / (d1 - d3));
    return dot(p - q, p - q);
  }
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) {
    return dot(cp, cp);
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 && d2 - d6 > 0.0) {
    const Vec3 q = a + ac * (d2 / (d2 - d6));
    return dot(p - q, p - q);
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 && (d4 - d3) + (d5 - d6) > 0.0) {
    const Vec3 q = b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    return dot(p - q, p - q);
  }
  const double denom = va + vb + vc;
  if (!(denom > 0.0)) {
    // Degenerate (collinear) triangle: nearest of the three edges.
    auto segment = [&p](const Vec3& s0, const Vec3& s1) {
      const Vec3 d = s1 - s0;
      const double len2 = dot(d, d);
      const double t = len2 > 0.0 ? std::clamp(dot(p - s0, d) / len2, 0.0, 1.0) : 0.0;
      const Vec3 q = s0 + d * t;
      return dot(p - q, p - q);
    };
    return std::min({segment(a, b), segment(b, c), segment(c, a)});
  }
  const double v = vb / denom;
  const double w = vc / denom;
  const Vec3 q = a + ab * v + ac * w;
  return dot(p - q, p - q);
}

PaintStore::PaintStore(double cover_radius, double cell_size) : cover_radius_(cover_radius), cell_size_(cell_size) {
  if (!(cover_radius > 0.0) || !(cell_size > 0.0)) {
    throw DomainError("cover radius and cell size must be positive");
  }
}

std::uint32_t PaintStore::add_vertex(const Vec3& v) {
  vertices_.push_back({static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)});
  return static_cast<std::uint32_t>(vertices_.size() - 1);
}

Vec3 PaintStore::vertex(std::uint32_t i) const {
  const Float3& f = vertices_[i];
  return {f[0], f[1], f[2]};
}

int PaintStore::cell_coord(double v) const { return static_cast<int>(std::floor(v / cell_size_)); }

std::uint64_t PaintStore::cell_key(int x, int y, int z) const {
  constexpr std::uint64_t bias = 1u << 20;
  constexpr std::uint64_t mask = (1u << 21) - 1;
  return ((static_cast<std::uint64_t>(x) + bias) & mask) | (((static_cast<std::uint64_t>(y) + bias) & mask) << 21) |
         (((static_cast<std::uint64_t>(z) + bias) & mask) << 42);
}

void PaintStore::insert(std::uint32_t entry, const Vec3& lo, const Vec3& hi) {
  const double pad = cover_radius_ + 1e-9;
  const int x0 = cell_coord(lo.x - pad), x1 = cell_coord(hi.x + pad);
  const int y0 = cell_coord(lo.y - pad), y1 = cell_coord(hi.y + pad);
  const int z0 = cell_coord(lo.z - pad), z1 = cell_coord(hi.z + pad);
  for (int z = z0; z <= z1; ++z) {
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        cells_[cell_key(x, y, z)].push_back(entry);
      }
    }
  }
}

void PaintStore::paint(std::span<const Vec3> vertices, std::span<const TriangleIndices> triangles,
                       std::span<const std::uint32_t> loose_points) {
  constexpr std::uint32_t unmapped = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(vertices.size(), unmapped);
  auto stored = [&](std::uint32_t i) {
    if (i >= vertices.size()) {
      throw DomainError("paint primitive references a missing vertex");
    }
    if (remap[i] == unmapped) {
      remap[i] = add_vertex(vertices[i]);
    }
    return remap[i];
  };
  for (const auto& tri : triangles) {
    const TriangleIndices local{stored(tri[0]), stored(tri[1]), stored(tri[2])};
    const auto id = static_cast<std::uint32_t>(triangles_.size());
    triangles_.push_back(local);
    const Vec3 a = vertex(local[0]), b = vertex(local[1]), c = vertex(local[2]);
    const Vec3 lo{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}), std::min({a.z, b.z, c.z})};
    const Vec3 hi{std::max({a.x, b.x, c.x}), std::max({a.y, b.y, c.y}), std::max({a.z, b.z, c.z})};
    // Rounded outward so the float box never rejects a point the exact test accepts.
    const double pad = cover_radius_ * (1.0 + 1e-6) + 1e-6;
    tri_bounds_.push_back({std::nextafter(static_cast<float>(lo.x - pad), -INFINITY),
                           std::nextafter(static_cast<float>(lo.y - pad), -INFINITY),
                           std::nextafter(static_cast<float>(lo.z - pad), -INFINITY),
                           std::nextafter(static_cast<float>(hi.x + pad), INFINITY),
                           std::nextafter(static_cast<float>(hi.y + pad), INFINITY),
                           std::nextafter(static_cast<float>(hi.z + pad), INFINITY)});
    insert(id, lo, hi);
  }
  for (std::uint32_t v : loose_points) {
    const std::uint32_t local = stored(v);
    const auto id = static_cast<std::uint32_t>(points_.size());
    points_.push_back(local);
    const Vec3 p = vertex(local);
    insert(id | kPointTag, p, p);
  }
}

bool PaintStore::covers(std::uint32_t entry, const Vec3& p) const {
  const double r2 = cover_radius_ * cover_radius_;
  if ((entry & kPointTag) != 0) {
    const Vec3 q = vertex(points_[entry & ~kPointTag]);
    return dot(p - q, p - q) <= r2;
  }
  const auto& bb = tri_bounds_[entry];
  if (p.x < bb[0] || p.y < bb[1] || p.z < bb[2] || p.x > bb[3] || p.y > bb[4] || p.z > bb[5]) {
    return false;
  }
  const TriangleIndices& t = triangles_[entry];
  return point_triangle_distance_sq(p, vertex(t[0]), vertex(t[1]), vertex(t[2])) <= r2;
}

bool PaintStore::is_seen(const Vec3& p) const {
  std::uint32_t hint = std::numeric_limits<std::uint32_t>::max();
  return is_seen(p, hint);
}

bool PaintStore::is_seen(const Vec3& p, std::uint32_t& hint) const {
  const auto it = cells_.find(cell_key(cell_coord(p.x), cell_coord(p.y), cell_coord(p.z)));
  if (it == cells_.end()) {
    return false;
  }
  // The hint only short-cuts a positive answer; any primitive within the
  // radius proves coverage, whichever cell it was filed under.
  const bool hint_valid = (hint & kPointTag) != 0 ? (hint & ~kPointTag) < points_.size() : hint < triangles_.size();
  if (hint_valid && covers(hint, p)) {
    return true;
  }
  for (std::uint32_t entry : it->second) {
    if (covers(entry, p)) {
      hint = entry;
      return true;
    }
  }
  return false;
}

std::array<Vec3, 3> PaintStore::triangle(std::size_t i) const {
  const auto& t = triangles_.at(i);
  return {vertex(t[0]), vertex(t[1]), vertex(t[2])};
}

Vec3 PaintStore::point(std::size_t i) const { return vertex(points_.at(i)); }

void PaintStore::dump(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(fmt::format("cannot write {}", path.string()));
  }
  out.write("PXNPAINT", 8);
  const std::uint64_t counts[2] = {triangles_.size(), points_.size()};
  out.write(reinterpret_cast<const char*>(counts), sizeof counts);
  for (const auto& t : triangles_) {
    for (auto v : t) {
      out.write(reinterpret_cast<const char*>(vertices_[v].data()), sizeof(Float3));
    }
  }
  for (auto v : points_) {
    out.write(reinterpret_cast<const char*>(vertices_[v].data()), sizeof(Float3));
  }
}

Triangulation paint_view(PaintStore& store, const DepthImage& depth, const Pose& pose, const CameraIntrinsics& k) {
  const PointCloud cloud = backproject_depth(depth, pose, k);
  Triangulation t = triangulate_and_filter(cloud, depth);
  store.paint(t);
  return t;
}

}  // namespace pixnav
