#include "pixnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

namespace pixnav {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::max_steps:
      return "max_steps";
    case Termination::stagnation:
      return "stagnation";
    case Termination::collision:
      return "collision";
    case Termination::policy_failure:
      return "policy_failure";
  }
  return "unknown";
}

Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::max_steps, Termination::stagnation, Termination::collision,
                 Termination::policy_failure}) {
    if (to_string(t) == s) {
      return t;
    }
  }
  throw DomainError(fmt::format("unknown termination reason '{}'", s));
}

std::vector<Vec3> EpisodeLog::path() const {
  std::vector<Vec3> out;
  out.reserve(steps.size() + 1);
  out.push_back(start.position);
  for (const auto& s : steps) {
    out.push_back(s.after.position);
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd m;
  m.n = values.size();
  if (values.empty()) {
    return m;
  }
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - m.mean) * (v - m.mean);
    }
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

MetricsSummary summarize(std::span<const EpisodeLog> logs) {
  if (logs.empty()) {
    throw DomainError("cannot summarize zero episodes");
  }
  std::vector<double> new_voxels;
  std::vector<double> distances;
  std::vector<double> surface;
  std::vector<double> step_ms;
  MetricsSummary s;
  for (const auto& log : logs) {
    for (const auto& step : log.steps) {
      new_voxels.push_back(static_cast<double>(step.new_voxels));
      step_ms.push_back(step.decision_ms);
    }
    distances.push_back(log.metrics.min_distance_to_target);
    surface.push_back(log.metrics.surface_seen_pct);
    s.total_steps += log.steps.size();
    s.collisions += log.reason == Termination::collision ? 1 : 0;
  }
  s.episodes = logs.size();
  s.new_voxels_per_pose = mean_std(new_voxels);
  s.min_distance_to_target = mean_std(distances);
  s.surface_seen_pct = mean_std(surface);
  s.step_time_ms = mean_std(step_ms);
  return s;
}

nlohmann::json to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}, {"n", m.n}}; }

nlohmann::json to_json(const MetricsSummary& s) {
  return {{"episodes", s.episodes},
          {"total_steps", s.total_steps},
          {"collisions", s.collisions},
          {"new_voxels_per_pose", to_json(s.new_voxels_per_pose)},
          {"min_distance_to_target", to_json(s.min_distance_to_target)},
          {"surface_seen_pct", to_json(s.surface_seen_pct)},
          {"step_time_ms", to_json(s.step_time_ms)}};
}

RankSumResult rank_sum_test(std::span<const double> first, std::span<const double> second) {
  const std::size_t n1 = first.size();
  const std::size_t n2 = second.size();
  if (n1 == 0 || n2 == 0) {
    throw DomainError("rank-sum test needs two non-empty samples");
  }
  struct Item {
    double value;
    bool from_first;
  };
  std::vector<Item> all;
  all.reserve(n1 + n2);
  for (double v : first) {
    all.push_back({v, true});
  }
  for (double v : second) {
    all.push_back({v, false});
  }
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  double rank_sum_first = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) {
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].from_first) {
        rank_sum_first += avg_rank;
      }
    }
    i = j;
  }
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double n = a + b;
  RankSumResult r;
  r.u = rank_sum_first - a * (a + 1.0) / 2.0;
  const double mean_u = a * b / 2.0;
  const double var_u = a * b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var_u <= 0.0) {
    return r;  // every value tied
  }
  r.z = (r.u - mean_u) / std::sqrt(var_u);
  r.p_two_sided = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  r.p_greater = 0.5 * std::erfc(r.z / std::sqrt(2.0));
  return r;
}

}  // namespace pixnav
