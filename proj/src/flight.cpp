#include "pixnav/flight.hpp"

#include <algorithm>
#include <chrono>

#include <spdlog/spdlog.h>

#include "pixnav/metrics.hpp"

namespace pixnav {

Pose apply_instruction(const Pose& pose, const Instruction& ins, const CameraIntrinsics& k, double step_length,
                       const MotionOptions& motion) {
  double turn = 0.0;
  try {
    const Vec3 look = camera_to_world(back_project(ins.lookat_px, k), pose);
    const double half_fov = k.hfov() / 2.0;
    turn = std::clamp(normalize_angle(yaw_of(look) - pose.yaw), -half_fov, half_fov);
  } catch (const DegenerateDirectionError&) {
    turn = 0.0;
  }
  const Pose turned{pose.position, normalize_angle(pose.yaw + turn)};

  Vec3 move = camera_to_world(back_project(ins.goto_px, k), motion.goto_post_rotation ? turned : pose);
  if (motion.planar) {
    move.z = 0.0;
    move = normalized(move);
  }
  return {pose.position + move * step_length, turned.yaw};
}

namespace {

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

  Instruction decide(const Observation& obs) override {
    const auto& k = obs.intrinsics;
    std::uniform_real_distribution<double> ux(0.0, k.width() - 1.0);
    std::uniform_real_distribution<double> uy(0.0, k.height() - 1.0);
    const PixelCoord g{ux(rng_), uy(rng_)};
    const PixelCoord l{ux(rng_), uy(rng_)};
    return {g, l, false};
  }
  std::string name() const override { return "random"; }

 private:
  std::mt19937_64 rng_;
};

class CenterPolicy final : public Policy {
 public:
  Instruction decide(const Observation& obs) override {
    const PixelCoord c{obs.intrinsics.cx(), obs.intrinsics.cy()};
    return {c, c, false};
  }
  std::string name() const override { return "center"; }
};

class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const OracleOptions& options, std::string name)
      : options_(options), name_(std::move(name)), paint_(options.cover_radius) {}

  Instruction decide(const Observation& obs) override {
    if (!grid_ || grid_intrinsics_ != obs.intrinsics) {
      grid_ = options_.planar ? CandidateGrid::middle_row(options_.kx, obs.intrinsics)
                              : CandidateGrid::uniform(options_.kx, options_.ky, obs.intrinsics);
      grid_intrinsics_ = obs.intrinsics;
    }
    if (!options_.cumulative) {
      paint_ = PaintStore(options_.cover_radius);
    }
    return infer(obs.scene, paint_, obs.pose, obs.intrinsics, *grid_, options_.params, obs.depth).instruction;
  }
  std::string name() const override { return name_; }

 private:
  OracleOptions options_;
  std::string name_;
  PaintStore paint_;
  std::optional<CandidateGrid> grid_;
  std::optional<CameraIntrinsics> grid_intrinsics_;
};

}  // namespace

std::unique_ptr<Policy> random_policy(std::uint64_t seed) { return std::make_unique<RandomPolicy>(seed); }

std::unique_ptr<Policy> center_policy() { return std::make_unique<CenterPolicy>(); }

std::unique_ptr<Policy> oracle_policy(const OracleOptions& options) {
  return std::make_unique<OraclePolicy>(options, "oracle");
}

std::unique_ptr<Policy> greedy_argmax_policy(int kx, int ky, OracleOptions options) {
  options.kx = kx;
  options.ky = ky;
  options.params.aggregation = Aggregation::argmax;
  return std::make_unique<OraclePolicy>(options, "greedy");
}

int stagnation_index(std::span<const std::size_t> new_voxels, std::size_t threshold, int window) {
  int run = 0;
  for (std::size_t i = 0; i < new_voxels.size(); ++i) {
    run = new_voxels[i] < threshold ? run + 1 : 0;
    if (run >= window) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

EpisodeLog run_episode(const SceneDescription& scene, Policy& policy, const Pose& start, const Vec3& target,
                       const EpisodeConfig& config, VoxelGrid& grid) {
  if (!scene.bounds.contains_closed(start.position) || inside_geometry(scene, start.position)) {
    throw InvalidPoseError("episode start pose is not in free space");
  }
  const auto& k = config.intrinsics;
  grid = VoxelGrid::for_scene(scene, config.voxel_size);

  EpisodeLog log;
  log.scene = scene.name;
  log.policy = policy.name();
  log.start = start;
  log.target = target;

  Pose pose = start;
  DepthImage depth = render_depth(scene, pose, k);
  log.initial_new_voxels = update_seen(grid, pose, depth, k, config.seen);

  int stagnant = 0;
  log.reason = Termination::max_steps;
  while (static_cast<int>(log.steps.size()) < config.max_steps) {
    const int index = static_cast<int>(log.steps.size());
    Instruction ins;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ins = policy.decide(Observation{scene, pose, depth, k, index});
    } catch (const PolicyError& e) {
      log.reason = Termination::policy_failure;
      log.failure = e.what();
      spdlog::warn("episode stopped at step {}: {}", index, e.what());
      break;
    }
    const double decision_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const Pose next = apply_instruction(pose, ins, k, config.step_length, config.motion);
    if (!scene.bounds.contains_closed(next.position) || inside_geometry(scene, next.position) ||
        segment_collides(scene, pose.position, next.position, config.collision_inflate)) {
      log.reason = Termination::collision;
      log.collision_pose = next;
      log.collision_instruction = ins;
      break;
    }
    depth = render_depth(scene, next, k);
    const std::size_t fresh = update_seen(grid, next, depth, k, config.seen);
    log.steps.push_back({index, pose, next, ins, fresh, decision_ms});
    pose = next;

    stagnant = fresh < config.stagnation_threshold ? stagnant + 1 : 0;
    if (stagnant >= config.stagnation_window) {
      log.reason = Termination::stagnation;
      break;
    }
  }

  std::vector<double> fresh_counts;
  std::vector<double> times;
  for (const auto& s : log.steps) {
    fresh_counts.push_back(static_cast<double>(s.new_voxels));
    times.push_back(s.decision_ms);
  }
  const auto path = log.path();
  log.metrics.new_voxels_per_pose = mean_std(fresh_counts).mean;
  log.metrics.mean_step_ms = mean_std(times).mean;
  log.metrics.min_distance_to_target = min_distance_to_target(path, target);
  log.metrics.surface_seen_pct = surface_seen_percent(grid);
  log.metrics.seen_voxels = grid.seen_count();
  return log;
}

EpisodeLog run_episode(const SceneDescription& scene, Policy& policy, const Pose& start, const Vec3& target,
                       const EpisodeConfig& config) {
  VoxelGrid grid({0, 0, 0}, 1.0, {1, 1, 1});
  return run_episode(scene, policy, start, target, config, grid);
}

}  // namespace pixnav
