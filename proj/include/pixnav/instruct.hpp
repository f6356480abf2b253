#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pixnav/geometry.hpp"
#include "pixnav/image.hpp"
#include "pixnav/painting.hpp"
#include "pixnav/scene.hpp"

namespace pixnav {

/// k_x * k_y pixels spread uniformly over the image: pixel (i, j), 1-based,
/// sits at ((i - 1/2) * width / k_x, (j - 1/2) * height / k_y). Stored
/// row-major (j outer).
struct CandidateGrid {
  int kx = 0;
  int ky = 0;
  std::vector<PixelCoord> pixels;

  static CandidateGrid uniform(int kx, int ky, const CameraIntrinsics& k);
  /// Planar flight: k_x pixels across the middle row.
  static CandidateGrid middle_row(int kx, const CameraIntrinsics& k);

  std::size_t size() const { return pixels.size(); }
};

/// Unseen-pixel count and their center of mass for one candidate view.
struct UnseenStats {
  std::size_t count = 0;
  std::optional<PixelCoord> center;  // present iff count > 0
};

struct Classification {
  Image<std::uint8_t> unseen;  // 1 = unseen
  UnseenStats stats;
};

/// A pixel is unseen when its CIE76 distance to the paint color exceeds
/// alpha. Background (miss) pixels expose nothing and count as seen.
Classification classify_unseen(const ColorImage& image, double alpha);

/// Candidate poses: the current pose translated by step_length along each
/// candidate pixel's ray, orientation unchanged.
std::vector<Pose> candidate_poses(const Pose& pose, const CandidateGrid& grid, const CameraIntrinsics& k,
                                  double step_length = 1.0);

/// w_i = N_i^2 / sum N^2. Returns nullopt when every count is zero (the
/// non-exposing case has no weights).
std::optional<std::vector<double>> weights(std::span<const std::size_t> counts);
std::optional<std::vector<double>> weights(std::span<const UnseenStats> stats);

PixelCoord goto_pixel(std::span<const double> w, const CandidateGrid& grid);
PixelCoord lookat_pixel(std::span<const double> w, std::span<const UnseenStats> stats);

struct Instruction {
  PixelCoord goto_px;
  PixelCoord lookat_px;
  bool fallback = false;
};

enum class Aggregation {
  weighted,  // squared-share weighted averages of candidate pixels and unseen centroids
  argmax,    // the single candidate with the most unseen pixels
};

struct InstructParams {
  double alpha = 65.0;
  double fallback_threshold = 0.015;
  double step_length = 1.0;
  Aggregation aggregation = Aggregation::weighted;
  RenderOptions render;
};

struct CandidateEvaluation {
  std::vector<UnseenStats> stats;  // one per grid pixel
  std::vector<char> blocked;       // candidate position inside or behind geometry
};

struct InferResult {
  Instruction instruction;
  CandidateEvaluation candidates;
  DepthImage depth;  // current view
};

/// Lowest row-major index among the maximum depth values.
PixelCoord argmax_depth_pixel(const DepthImage& depth);

/// Render every unblocked candidate against the painted snapshot and count
/// unseen pixels.
CandidateEvaluation evaluate_candidates(const SceneDescription& scene, const PaintStore& painted, const Pose& pose,
                                        const CameraIntrinsics& k, const CandidateGrid& grid,
                                        const InstructParams& params);

/// Turn candidate statistics into an instruction. Falls back to the deepest
/// pixel of `depth` when no candidate reaches the unseen-pixel threshold.
Instruction aggregate(const CandidateEvaluation& eval, const CandidateGrid& grid, const DepthImage& depth,
                      const CameraIntrinsics& k, const InstructParams& params);

/// Full label computation for one pose: render depth, paint the current view
/// into `paint` (callers wanting a snapshot pass a copy), evaluate candidates
/// and aggregate.
InferResult infer(const SceneDescription& scene, PaintStore& paint, const Pose& pose, const CameraIntrinsics& k,
                  const CandidateGrid& grid, const InstructParams& params = {});

/// Same as infer, reusing a depth image already rendered from `pose`.
InferResult infer(const SceneDescription& scene, PaintStore& paint, const Pose& pose, const CameraIntrinsics& k,
                  const CandidateGrid& grid, const InstructParams& params, DepthImage depth);

}  // namespace pixnav
