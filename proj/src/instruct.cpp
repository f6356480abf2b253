#include "pixnav/instruct.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace pixnav {

CandidateGrid CandidateGrid::uniform(int kx, int ky, const CameraIntrinsics& k) {
  if (kx <= 0 || ky <= 0) {
    throw DomainError("candidate grid dimensions must be positive");
  }
  CandidateGrid grid{kx, ky, {}};
  grid.pixels.reserve(static_cast<std::size_t>(kx) * ky);
  for (int j = 1; j <= ky; ++j) {
    for (int i = 1; i <= kx; ++i) {
      const PixelCoord p{(i - 0.5) * k.width() / kx, (j - 0.5) * k.height() / ky};
      if (!k.contains(p)) {
        throw DomainError(fmt::format("{}x{} candidate grid does not fit a {}x{} image", kx, ky, k.width(),
                                      k.height()));
      }
      grid.pixels.push_back(p);
    }
  }
  return grid;
}

CandidateGrid CandidateGrid::middle_row(int kx, const CameraIntrinsics& k) { return uniform(kx, 1, k); }

Classification classify_unseen(const ColorImage& image, double alpha) {
  Classification out{Image<std::uint8_t>(image.width(), image.height(), 0), {}};
  const Lab red = srgb_to_lab(kPaintRed);
  // Flat shading makes runs of equal colors; memoize the last verdict.
  Rgb last_color = kBackground;
  bool last_unseen = false;
  bool have_last = false;
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image(x, y);
      if (c == kBackground) {
        continue;
      }
      if (!have_last || !(c == last_color)) {
        last_color = c;
        last_unseen = delta_e76(srgb_to_lab(c), red) > alpha;
        have_last = true;
      }
      if (last_unseen) {
        out.unseen(x, y) = 1;
        ++out.stats.count;
        sum_x += x;
        sum_y += y;
      }
    }
  }
  if (out.stats.count > 0) {
    const double n = static_cast<double>(out.stats.count);
    out.stats.center = PixelCoord{sum_x / n, sum_y / n};
  }
  return out;
}

std::vector<Pose> candidate_poses(const Pose& pose, const CandidateGrid& grid, const CameraIntrinsics& k,
                                  double step_length) {
  std::vector<Pose> poses;
  poses.reserve(grid.size());
  for (const auto& p : grid.pixels) {
    const Vec3 dir = camera_to_world(back_project(p, k), pose);
    poses.push_back({pose.position + dir * step_length, pose.yaw});
  }
  return poses;
}

std::optional<std::vector<double>> weights(std::span<const std::size_t> counts) {
  double total = 0.0;
  for (auto n : counts) {
    total += static_cast<double>(n) * static_cast<double>(n);
  }
  if (total == 0.0) {
    return std::nullopt;
  }
  std::vector<double> w;
  w.reserve(counts.size());
  for (auto n : counts) {
    w.push_back(static_cast<double>(n) * static_cast<double>(n) / total);
  }
  return w;
}

std::optional<std::vector<double>> weights(std::span<const UnseenStats> stats) {
  std::vector<std::size_t> counts;
  counts.reserve(stats.size());
  for (const auto& s : stats) {
    counts.push_back(s.count);
  }
  return weights(counts);
}

PixelCoord goto_pixel(std::span<const double> w, const CandidateGrid& grid) {
  if (w.size() != grid.size()) {
    throw DomainError("weight count does not match the candidate grid");
  }
  PixelCoord g{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    g.x += w[i] * grid.pixels[i].x;
    g.y += w[i] * grid.pixels[i].y;
  }
  return g;
}

PixelCoord lookat_pixel(std::span<const double> w, std::span<const UnseenStats> stats) {
  if (w.size() != stats.size()) {
    throw DomainError("weight count does not match the candidate statistics");
  }
  PixelCoord l{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) {
      continue;
    }
    if (!stats[i].center) {
      throw DomainError("positive weight on a candidate without unseen pixels");
    }
    l.x += w[i] * stats[i].center->x;
    l.y += w[i] * stats[i].center->y;
  }
  return l;
}

PixelCoord argmax_depth_pixel(const DepthImage& depth) {
  if (depth.empty()) {
    throw DomainError("empty depth image");
  }
  const auto it = std::max_element(depth.data().begin(), depth.data().end());  // first maximum
  const auto i = static_cast<std::size_t>(it - depth.data().begin());
  return {static_cast<double>(i % static_cast<std::size_t>(depth.width())),
          static_cast<double>(i / static_cast<std::size_t>(depth.width()))};
}

CandidateEvaluation evaluate_candidates(const SceneDescription& scene, const PaintStore& painted, const Pose& pose,
                                        const CameraIntrinsics& k, const CandidateGrid& grid,
                                        const InstructParams& params) {
  const auto poses = candidate_poses(pose, grid, k, params.step_length);
  CandidateEvaluation eval;
  eval.stats.resize(poses.size());
  eval.blocked.assign(poses.size(), 0);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Vec3& to = poses[i].position;
    if (!scene.bounds.contains_closed(to) || inside_geometry(scene, to) ||
        segment_collides(scene, pose.position, to, 0.0)) {
      eval.blocked[i] = 1;
      continue;
    }
    const ColorImage view = render_color(scene, painted, poses[i], k, params.render);
    eval.stats[i] = classify_unseen(view, params.alpha).stats;
  }
  return eval;
}

Instruction aggregate(const CandidateEvaluation& eval, const CandidateGrid& grid, const DepthImage& depth,
                      const CameraIntrinsics& k, const InstructParams& params) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < eval.stats.size(); ++i) {
    if (eval.stats[i].count > eval.stats[best].count) {
      best = i;
    }
  }
  const std::size_t max_count = eval.stats.empty() ? 0 : eval.stats[best].count;
  const double exposed = static_cast<double>(max_count) / static_cast<double>(k.pixel_count());
  if (exposed < params.fallback_threshold) {
    const PixelCoord deepest = argmax_depth_pixel(depth);
    return {deepest, deepest, true};
  }
  if (params.aggregation == Aggregation::argmax) {
    return {grid.pixels[best], *eval.stats[best].center, false};
  }
  const auto w = weights(std::span<const UnseenStats>(eval.stats));
  return {goto_pixel(*w, grid), lookat_pixel(*w, eval.stats), false};
}

InferResult infer(const SceneDescription& scene, PaintStore& paint, const Pose& pose, const CameraIntrinsics& k,
                  const CandidateGrid& grid, const InstructParams& params, DepthImage depth) {
  if (depth.width() != k.width() || depth.height() != k.height()) {
    throw DomainError("depth image does not match the camera");
  }
  paint_view(paint, depth, pose, k);
  InferResult result;
  result.candidates = evaluate_candidates(scene, paint, pose, k, grid, params);
  result.instruction = aggregate(result.candidates, grid, depth, k, params);
  result.depth = std::move(depth);
  return result;
}

InferResult infer(const SceneDescription& scene, PaintStore& paint, const Pose& pose, const CameraIntrinsics& k,
                  const CandidateGrid& grid, const InstructParams& params) {
  return infer(scene, paint, pose, k, grid, params, render_depth(scene, pose, k));
}

}  // namespace pixnav
