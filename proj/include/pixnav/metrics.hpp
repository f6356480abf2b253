#pragma once

#include <cstddef>
#include <span>

#include <nlohmann/json.hpp>

#include "pixnav/episode.hpp"

namespace pixnav {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for fewer than two values
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

/// Aggregate over a batch of episodes. New voxels and step times are pooled
/// over all steps; distance and surface coverage are per-episode values.
struct MetricsSummary {
  MeanStd new_voxels_per_pose;
  MeanStd min_distance_to_target;
  MeanStd surface_seen_pct;
  MeanStd step_time_ms;
  std::size_t episodes = 0;
  std::size_t total_steps = 0;
  std::size_t collisions = 0;
};

/// Throws DomainError for an empty batch.
MetricsSummary summarize(std::span<const EpisodeLog> logs);

nlohmann::json to_json(const MeanStd& m);
nlohmann::json to_json(const MetricsSummary& s);

/// Wilcoxon rank-sum (Mann-Whitney U) with average ranks for ties and the
/// tie-corrected normal approximation.
struct RankSumResult {
  double u = 0.0;        // U statistic of the first sample
  double z = 0.0;        // positive when the first sample tends to be larger
  double p_two_sided = 1.0;
  double p_greater = 0.5;  // one-sided: first sample stochastically larger
};

RankSumResult rank_sum_test(std::span<const double> first, std::span<const double> second);

}  // namespace pixnav
