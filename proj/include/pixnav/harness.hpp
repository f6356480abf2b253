#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pixnav/config.hpp"
#include "pixnav/episode.hpp"
#include "pixnav/flight.hpp"
#include "pixnav/metrics.hpp"
#include "pixnav/scene.hpp"

namespace pixnav {

/// Start pose, target and policy seed of one episode. Depends only on
/// (scene, config.seed, episode), so different policies fly paired episodes.
struct EpisodeSetup {
  Pose start;
  Vec3 target;
  std::uint64_t seed = 0;
};

EpisodeSetup episode_setup(const SceneDescription& scene, const RunConfig& config, int episode);

/// "oracle", "random", "greedy", "center" or "external:<shell command>".
/// Throws ConfigError for anything else.
std::unique_ptr<Policy> make_policy(const std::string& spec, const RunConfig& config, std::uint64_t seed,
                                    const std::filesystem::path& scratch = {});

/// Flies `episodes` paired episodes (in parallel up to the thread limit).
std::vector<EpisodeLog> fly_batch(const SceneDescription& scene, const RunConfig& config, const std::string& policy,
                                  int episodes, const std::filesystem::path& scratch = {});

/// Sparse-vs-dense candidate comparison on random poses: both instructions
/// are computed against the same painted snapshot, distances in units of the
/// image diagonal.
struct CompareOptions {
  std::size_t poses = 200;
  int sparse = 3;
  int dense = 9;
  Aggregation sparse_aggregation = Aggregation::weighted;
  Aggregation dense_aggregation = Aggregation::argmax;
};

struct CompareResult {
  std::vector<double> goto_distance;
  std::vector<double> lookat_distance;
  std::size_t sparse_fallbacks = 0;
  std::size_t dense_fallbacks = 0;
  MeanStd goto_stats;
  MeanStd lookat_stats;
};

CompareResult compare_k(const SceneDescription& scene, const RunConfig& config, const CompareOptions& options);
nlohmann::json to_json(const CompareResult& r, const CompareOptions& options);

}  // namespace pixnav
