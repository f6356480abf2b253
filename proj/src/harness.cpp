#include "pixnav/harness.hpp"

#include <fmt/format.h>

#include "pixnav/datagen.hpp"
#include "pixnav/errors.hpp"
#include "pixnav/external_policy.hpp"
#include "pixnav/parallel.hpp"

namespace pixnav {

namespace {

std::mt19937_64 episode_rng(std::uint64_t seed, std::uint64_t episode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(episode), 0x5eedu};
  return std::mt19937_64(seq);
}

}  // namespace

EpisodeSetup episode_setup(const SceneDescription& scene, const RunConfig& config, int episode) {
  auto rng = episode_rng(config.seed, static_cast<std::uint64_t>(episode));
  const PoseSampling sampling{0.5, 10000, config.mode == FlightMode::planar, config.altitude};
  EpisodeSetup setup;
  setup.start = sample_pose(scene, rng, sampling);
  if (!scene.targets.empty()) {
    setup.target = scene.targets[rng() % scene.targets.size()];
  } else {
    setup.target = sample_pose(scene, rng, sampling).position;
  }
  setup.seed = rng();
  return setup;
}

std::unique_ptr<Policy> make_policy(const std::string& spec, const RunConfig& config, std::uint64_t seed,
                                    const std::filesystem::path& scratch) {
  if (spec == "oracle") {
    return oracle_policy(config.oracle_options());
  }
  if (spec == "random") {
    return random_policy(seed);
  }
  if (spec == "greedy") {
    return greedy_argmax_policy(config.kx, config.ky, config.oracle_options());
  }
  if (spec == "center") {
    return center_policy();
  }
  constexpr std::string_view prefix = "external:";
  if (spec.starts_with(prefix) && spec.size() > prefix.size()) {
    ExternalPolicyOptions opts;
    opts.command = spec.substr(prefix.size());
    opts.scratch_dir = scratch;
    return external_policy(opts);
  }
  throw ConfigError(fmt::format("unknown policy '{}'", spec));
}

std::vector<EpisodeLog> fly_batch(const SceneDescription& scene, const RunConfig& config, const std::string& policy,
                                  int episodes, const std::filesystem::path& scratch) {
  const EpisodeConfig ep = config.episode_config();
  std::vector<EpisodeLog> logs(static_cast<std::size_t>(std::max(0, episodes)));
  // External processes serialize on their own pipes; one at a time keeps the
  // scratch rasters of different episodes apart.
  auto body = [&](std::size_t i) {
    const EpisodeSetup setup = episode_setup(scene, config, static_cast<int>(i));
    auto p = make_policy(policy, config, setup.seed,
                         scratch.empty() ? scratch : scratch / fmt::format("episode-{:04}", i));
    logs[i] = run_episode(scene, *p, setup.start, setup.target, ep);
    logs[i].seed = setup.seed;
  };
  if (policy.starts_with("external:")) {
    for (std::size_t i = 0; i < logs.size(); ++i) {
      body(i);
    }
  } else {
    parallel_for(logs.size(), body);
  }
  return logs;
}

CompareResult compare_k(const SceneDescription& scene, const RunConfig& config, const CompareOptions& options) {
  const CameraIntrinsics k = config.intrinsics();
  const CandidateGrid sparse = config.mode == FlightMode::planar ? CandidateGrid::middle_row(options.sparse, k)
                                                                 : CandidateGrid::uniform(options.sparse, options.sparse, k);
  const CandidateGrid dense = config.mode == FlightMode::planar ? CandidateGrid::middle_row(options.dense, k)
                                                                : CandidateGrid::uniform(options.dense, options.dense, k);
  InstructParams sparse_params = config.instruct_params();
  sparse_params.aggregation = options.sparse_aggregation;
  InstructParams dense_params = config.instruct_params();
  dense_params.aggregation = options.dense_aggregation;
  const PoseSampling sampling{0.5, 10000, config.mode == FlightMode::planar, config.altitude};

  CompareResult out;
  out.goto_distance.resize(options.poses);
  out.lookat_distance.resize(options.poses);
  std::vector<char> sparse_fb(options.poses, 0);
  std::vector<char> dense_fb(options.poses, 0);
  parallel_for(options.poses, [&](std::size_t i) {
    auto rng = episode_rng(config.seed, i);
    const Pose pose = sample_pose(scene, rng, sampling);
    PaintStore paint(config.cover_radius);
    const InferResult a = infer(scene, paint, pose, k, sparse, sparse_params);
    // `paint` now holds the current view; score the dense grid against the same snapshot.
    const CandidateEvaluation eval = evaluate_candidates(scene, paint, pose, k, dense, dense_params);
    const Instruction b = aggregate(eval, dense, a.depth, k, dense_params);
    out.goto_distance[i] = pixel_distance(a.instruction.goto_px, b.goto_px) / k.diagonal();
    out.lookat_distance[i] = pixel_distance(a.instruction.lookat_px, b.lookat_px) / k.diagonal();
    sparse_fb[i] = a.instruction.fallback;
    dense_fb[i] = b.fallback;
  });
  out.sparse_fallbacks = static_cast<std::size_t>(std::count(sparse_fb.begin(), sparse_fb.end(), 1));
  out.dense_fallbacks = static_cast<std::size_t>(std::count(dense_fb.begin(), dense_fb.end(), 1));
  out.goto_stats = mean_std(out.goto_distance);
  out.lookat_stats = mean_std(out.lookat_distance);
  return out;
}

nlohmann::json to_json(const CompareResult& r, const CompareOptions& options) {
  auto agg = [](Aggregation a) { return a == Aggregation::weighted ? "weighted" : "argmax"; };
  return {{"poses", options.poses},
          {"sparse", {{"k", options.sparse}, {"aggregation", agg(options.sparse_aggregation)}}},
          {"dense", {{"k", options.dense}, {"aggregation", agg(options.dense_aggregation)}}},
          {"units", "image_diagonal"},
          {"goto", to_json(r.goto_stats)},
          {"lookat", to_json(r.lookat_stats)},
          {"sparse_fallbacks", r.sparse_fallbacks},
          {"dense_fallbacks", r.dense_fallbacks}};
}

}  // namespace pixnav
