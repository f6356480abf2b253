#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixnav/geometry.hpp"
#include "pixnav/instruct.hpp"

namespace pixnav {

enum class Termination {
  max_steps,
  stagnation,
  collision,
  policy_failure,  // external policy timed out or broke the protocol
};

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct StepRecord {
  int index = 0;
  Pose before;
  Pose after;
  Instruction instruction;
  std::size_t new_voxels = 0;
  double decision_ms = 0.0;
};

/// Per-episode exposure numbers, filled in when the episode ends.
struct EpisodeMetrics {
  double new_voxels_per_pose = 0.0;  // mean over steps; 0 for an episode without steps
  double min_distance_to_target = 0.0;
  double surface_seen_pct = 0.0;
  double mean_step_ms = 0.0;
  std::size_t seen_voxels = 0;
};

struct EpisodeLog {
  std::string scene;
  std::string policy;
  std::uint64_t seed = 0;
  Pose start;
  Vec3 target;
  std::size_t initial_new_voxels = 0;  // voxels seen from the start pose
  std::vector<StepRecord> steps;
  Termination reason = Termination::max_steps;
  std::optional<Pose> collision_pose;  // the rejected move, when reason == collision
  std::optional<Instruction> collision_instruction;
  std::string failure;                 // policy failure message
  EpisodeMetrics metrics;

  /// Start position followed by every post-step position.
  std::vector<Vec3> path() const;
};

}  // namespace pixnav
