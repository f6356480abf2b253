#include "pixnav/serialize.hpp"

#include <fmt/format.h>

#include "pixnav/errors.hpp"

namespace pixnav {

nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw DomainError("expected [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json to_json(const PixelCoord& p) { return nlohmann::json::array({p.x, p.y}); }

PixelCoord pixel_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw DomainError("expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json to_json(const Pose& p) { return {{"position", to_json(p.position)}, {"yaw", p.yaw}}; }

Pose pose_from_json(const nlohmann::json& j) {
  return {vec3_from_json(j.at("position")), j.at("yaw").get<double>()};
}

nlohmann::json to_json(const Instruction& ins) {
  return {{"goto", to_json(ins.goto_px)}, {"lookat", to_json(ins.lookat_px)}, {"fallback", ins.fallback}};
}

nlohmann::json to_json(const EpisodeLog& log) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : log.steps) {
    steps.push_back({{"index", s.index},
                     {"before", to_json(s.before)},
                     {"after", to_json(s.after)},
                     {"instruction", to_json(s.instruction)},
                     {"new_voxels", s.new_voxels},
                     {"decision_ms", s.decision_ms}});
  }
  nlohmann::json out{{"scene", log.scene},
                     {"policy", log.policy},
                     {"seed", log.seed},
                     {"start", to_json(log.start)},
                     {"target", to_json(log.target)},
                     {"initial_new_voxels", log.initial_new_voxels},
                     {"termination", to_string(log.reason)},
                     {"metrics",
                      {{"new_voxels_per_pose", log.metrics.new_voxels_per_pose},
                       {"min_distance_to_target", log.metrics.min_distance_to_target},
                       {"surface_seen_pct", log.metrics.surface_seen_pct},
                       {"mean_step_ms", log.metrics.mean_step_ms},
                       {"seen_voxels", log.metrics.seen_voxels}}},
                     {"steps", std::move(steps)}};
  if (log.collision_pose) {
    out["collision_pose"] = to_json(*log.collision_pose);
  }
  if (log.collision_instruction) {
    out["collision_instruction"] = to_json(*log.collision_instruction);
  }
  if (!log.failure.empty()) {
    out["failure"] = log.failure;
  }
  return out;
}

std::string episode_csv_header() {
  return "episode,scene,policy,seed,steps,termination,new_voxels_per_pose,min_distance_to_target,"
         "surface_seen_pct,mean_step_ms,seen_voxels";
}

std::string episode_csv_row(const EpisodeLog& log, int episode) {
  return fmt::format("{},{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.3f},{}", episode, log.scene, log.policy, log.seed,
                     log.steps.size(), to_string(log.reason), log.metrics.new_voxels_per_pose,
                     log.metrics.min_distance_to_target, log.metrics.surface_seen_pct, log.metrics.mean_step_ms,
                     log.metrics.seen_voxels);
}

}  // namespace pixnav
