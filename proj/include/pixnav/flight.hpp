#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "pixnav/episode.hpp"
#include "pixnav/instruct.hpp"
#include "pixnav/painting.hpp"
#include "pixnav/scene.hpp"
#include "pixnav/voxels.hpp"

namespace pixnav {

struct MotionOptions {
  bool planar = false;              // keep altitude; horizontal step of full length
  bool goto_post_rotation = false;  // back-project Goto with the new heading instead of the old one
};

/// One navigation step: translate step_length along the Goto ray and turn
/// toward the horizontal projection of the Lookat ray, the turn clamped to
/// half the horizontal field of view.
Pose apply_instruction(const Pose& pose, const Instruction& ins, const CameraIntrinsics& k, double step_length,
                       const MotionOptions& motion = {});

struct Observation {
  const SceneDescription& scene;
  const Pose& pose;
  const DepthImage& depth;  // rendered from pose
  const CameraIntrinsics& intrinsics;
  int step = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  /// May throw PolicyError; the episode then ends with policy_failure.
  virtual Instruction decide(const Observation& obs) = 0;
  virtual std::string name() const = 0;
};

/// Uniform in-bounds pixels from a seeded generator.
std::unique_ptr<Policy> random_policy(std::uint64_t seed);

/// Always the image center for both pixels.
std::unique_ptr<Policy> center_policy();

struct OracleOptions {
  int kx = 3;
  int ky = 3;
  bool planar = false;      // middle-row candidate grid
  bool cumulative = true;   // keep paint across steps
  double cover_radius = 0.05;
  InstructParams params;
};

/// The label oracle flown directly: paints each view and aggregates the
/// candidate renders (weighted or argmax, per params.aggregation).
std::unique_ptr<Policy> oracle_policy(const OracleOptions& options);

/// Dense baseline: the candidate with the most unseen pixels wins.
std::unique_ptr<Policy> greedy_argmax_policy(int kx, int ky, OracleOptions options = {});

struct EpisodeConfig {
  CameraIntrinsics intrinsics = CameraIntrinsics::square(224, 90.0);
  double step_length = 1.0;
  int max_steps = 500;
  std::size_t stagnation_threshold = 30;  // fewer new voxels than this counts as stagnant
  int stagnation_window = 20;             // consecutive stagnant steps that end the episode
  double collision_inflate = 0.0;
  double voxel_size = 0.25;
  SeenUpdateOptions seen;
  MotionOptions motion;
};

/// Runs render -> decide -> move -> voxel update until a termination rule
/// fires. Throws InvalidPoseError when the start pose is not in free space.
EpisodeLog run_episode(const SceneDescription& scene, Policy& policy, const Pose& start, const Vec3& target,
                       const EpisodeConfig& config);

/// Same, exposing the final voxel grid.
EpisodeLog run_episode(const SceneDescription& scene, Policy& policy, const Pose& start, const Vec3& target,
                       const EpisodeConfig& config, VoxelGrid& grid_out);

/// Index of the step at which a new-voxel series first completes `window`
/// consecutive values below `threshold`, or -1.
int stagnation_index(std::span<const std::size_t> new_voxels, std::size_t threshold, int window);

}  // namespace pixnav
