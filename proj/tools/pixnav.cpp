// pixnav command-line entry point.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "pixnav/config.hpp"
#include "pixnav/datagen.hpp"
#include "pixnav/errors.hpp"
#include "pixnav/harness.hpp"
#include "pixnav/metrics.hpp"
#include "pixnav/parallel.hpp"
#include "pixnav/scene_gen.hpp"
#include "pixnav/serialize.hpp"

namespace fs = std::filesystem;
using namespace pixnav;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kConfig = 3, kScene = 4, kExternalPolicy = 5 };

constexpr const char* kSchemas = R"schema({
  "scene": {"name": "string", "distance_unit": "number", "bounds": {"min": "[x,y,z]", "max": "[x,y,z]"},
            "boxes": [{"min": "[x,y,z]", "max": "[x,y,z]", "color": "[r,g,b] 0-255"}], "targets": ["[x,y,z]"]},
  "config": "RunConfig object; every key optional, see `pixnav fly --help` and README",
  "manifest.jsonl": {"id": "integer", "scene": "string", "pose": {"position": "[x,y,z]", "yaw": "radians"},
                     "depth": "relative path (.f32)", "grad": "relative path (.f32, 2 channels)",
                     "color": "relative path (.png)", "goto": "[x,y]", "lookat": "[x,y]", "fallback": "bool"},
  "dataset.json": {"format": "pixnav-dataset/1", "scene": "string", "seed": "integer", "count": "integer",
                   "fallbacks": "integer", "fallback_fraction": "number", "mode": "2d|3d", "trajectory": "bool",
                   "intrinsics": {"width": "int", "height": "int", "hfov_deg": "number", "vfov_deg": "number"},
                   "config": "RunConfig"},
  "raster (.f32)": "8-byte magic PXNRAST1, uint32 LE width, height, channels, float32 LE channel-planar values",
  "episodes.jsonl": {"scene": "string", "policy": "string", "seed": "integer", "start": "pose", "target": "[x,y,z]",
                     "initial_new_voxels": "integer", "termination": "max_steps|stagnation|collision|policy_failure",
                     "collision_pose": "pose (optional)", "failure": "string (optional)",
                     "metrics": {"new_voxels_per_pose": "number", "min_distance_to_target": "number",
                                 "surface_seen_pct": "number", "mean_step_ms": "number", "seen_voxels": "integer"},
                     "steps": [{"index": "int", "before": "pose", "after": "pose",
                                "instruction": {"goto": "[x,y]", "lookat": "[x,y]", "fallback": "bool"},
                                "new_voxels": "int", "decision_ms": "number"}]},
  "summary.json": {"episodes": "int", "total_steps": "int", "collisions": "int",
                   "new_voxels_per_pose": "{mean,std,n}", "min_distance_to_target": "{mean,std,n}",
                   "surface_seen_pct": "{mean,std,n}", "step_time_ms": "{mean,std,n}",
                   "terminations": {"<reason>": "int"}},
  "episodes.csv": "episode,scene,policy,seed,steps,termination,new_voxels_per_pose,min_distance_to_target,surface_seen_pct,mean_step_ms,seen_voxels",
  "compare.json": {"poses": "int", "sparse": {"k": "int", "aggregation": "string"},
                   "dense": {"k": "int", "aggregation": "string"}, "units": "image_diagonal",
                   "goto": "{mean,std,n}", "lookat": "{mean,std,n}", "sparse_fallbacks": "int", "dense_fallbacks": "int"},
  "policy protocol": {"request": {"step": "int", "width": "int", "height": "int", "depth_raster_path": "path",
                                  "gradmap_path": "path"},
                      "reply": {"goto": "[x,y]", "lookat": "[x,y]"}}
})schema";

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("GOTO_LOG_LEVEL")) {
    const std::string s = level;
    if (s == "error" || s == "warn" || s == "info" || s == "debug") {
      spdlog::set_level(spdlog::level::from_str(s));
    } else {
      spdlog::warn("ignoring GOTO_LOG_LEVEL={} (expected error, warn, info or debug)", s);
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw IoError(fmt::format("cannot write {}", path.string()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"pixnav: Goto/Lookat exploration simulator and dataset generator"};
  app.require_subcommand(0, 1);

  bool schema = false;
  unsigned threads = 0;
  std::string config_path;
  app.add_flag("--schema", schema, "Print the JSON/JSONL/CSV schemas of every output and exit");
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");
  app.add_option("--config", config_path, "Run configuration JSON (defaults are the published settings)");

  // gen-scene
  auto* gen_scene = app.add_subcommand("gen-scene", "Generate a procedural scene");
  std::string preset = "apartment";
  std::uint64_t scene_seed = 0;
  std::string scene_out;
  gen_scene->add_option("--preset", preset, "corridor, apartment or hall")
      ->check(CLI::IsMember({"corridor", "apartment", "hall"}));
  gen_scene->add_option("--seed", scene_seed, "Generator seed");
  gen_scene->add_option("--out", scene_out, "Output scene JSON")->required();

  // gen-dataset
  auto* gen_dataset = app.add_subcommand("gen-dataset", "Generate a labelled dataset");
  std::string ds_scene;
  std::size_t ds_n = 0;
  std::string ds_mode;
  std::string ds_out;
  std::optional<std::uint64_t> ds_seed;
  bool ds_trajectory = false;
  int ds_traj_len = 50;
  gen_dataset->add_option("--scene", ds_scene, "Scene JSON");
  gen_dataset->add_option("--n", ds_n, "Number of samples")->required();
  gen_dataset->add_option("--mode", ds_mode, "2d or 3d")->check(CLI::IsMember({"2d", "3d", "2D", "3D"}));
  gen_dataset->add_option("--out", ds_out, "Output directory")->required();
  gen_dataset->add_option("--seed", ds_seed, "Sampling seed");
  gen_dataset->add_flag("--trajectory", ds_trajectory, "Chain poses by flying the oracle (cumulative paint)");
  gen_dataset->add_option("--trajectory-length", ds_traj_len, "Samples per trajectory");

  // fly
  auto* fly = app.add_subcommand("fly", "Fly exploration episodes and score them");
  std::string fly_scene;
  std::string fly_policy = "oracle";
  int fly_episodes = 1;
  std::string fly_out;
  std::optional<std::uint64_t> fly_seed;
  std::optional<int> fly_max_steps;
  fly->add_option("--scene", fly_scene, "Scene JSON");
  fly->add_option("--policy", fly_policy, "oracle, random, greedy, center or external:<command>");
  fly->add_option("--episodes", fly_episodes, "Episode count")->check(CLI::PositiveNumber);
  fly->add_option("--out", fly_out, "Output directory")->required();
  fly->add_option("--seed", fly_seed, "Episode seed");
  fly->add_option("--max-steps", fly_max_steps, "Override the step cap")->check(CLI::PositiveNumber);

  // compare-k
  auto* compare = app.add_subcommand("compare-k", "Sparse weighted vs dense argmax candidate grids");
  std::string cmp_scene;
  CompareOptions cmp;
  std::string cmp_out;
  std::optional<std::uint64_t> cmp_seed;
  std::string cmp_dense_agg = "argmax";
  std::string cmp_sparse_agg = "weighted";
  compare->add_option("--scene", cmp_scene, "Scene JSON");
  compare->add_option("--poses", cmp.poses, "Random pose count");
  compare->add_option("--sparse", cmp.sparse, "Sparse grid side")->check(CLI::PositiveNumber);
  compare->add_option("--dense", cmp.dense, "Dense grid side")->check(CLI::PositiveNumber);
  compare->add_option("--sparse-aggregate", cmp_sparse_agg, "weighted or argmax")
      ->check(CLI::IsMember({"weighted", "argmax"}));
  compare->add_option("--dense-aggregate", cmp_dense_agg, "weighted or argmax")
      ->check(CLI::IsMember({"weighted", "argmax"}));
  compare->add_option("--out", cmp_out, "Output JSON")->required();
  compare->add_option("--seed", cmp_seed, "Pose seed");

  // validate-dataset
  auto* validate_cmd = app.add_subcommand("validate-dataset", "Check a generated dataset");
  std::string val_path;
  validate_cmd->add_option("--path", val_path, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (schema) {
    std::cout << nlohmann::json::parse(kSchemas).dump(2) << '\n';
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kUsage;
  }
  set_thread_limit(threads);

  RunConfig config;
  try {
    if (!config_path.empty()) {
      config = load_config(config_path);
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  }

  auto load_scene_arg = [&](const std::string& arg) {
    const fs::path path = arg.empty() ? config.scene : fs::path(arg);
    if (path.empty()) {
      throw ConfigError("no scene given (--scene or the config's \"scene\")");
    }
    return load_scene(path);
  };

  try {
    if (*gen_scene) {
      const SceneDescription scene = generate_scene(preset_from_string(preset), scene_seed);
      save_scene(scene_out, scene);
      fmt::print("{}: {} boxes, {} targets\n", scene_out, scene.boxes.size(), scene.targets.size());
    } else if (*gen_dataset) {
      if (!ds_mode.empty()) {
        config.mode = mode_from_string(ds_mode);
      }
      if (ds_seed) {
        config.seed = *ds_seed;
      }
      const SceneDescription scene = load_scene_arg(ds_scene);
      const DatasetSummary s = generate_dataset(scene, config, {ds_n, ds_trajectory, ds_traj_len}, ds_out);
      fmt::print("{}: {} samples, fallback fraction {:.4f}\n", ds_out, s.count, s.fallback_fraction());
    } else if (*fly) {
      if (fly_seed) {
        config.seed = *fly_seed;
      }
      if (fly_max_steps) {
        config.max_steps = *fly_max_steps;
      }
      validate(config);
      const SceneDescription scene = load_scene_arg(fly_scene);
      const fs::path out = fly_out;
      fs::create_directories(out);
      const auto logs = fly_batch(scene, config, fly_policy, fly_episodes, out / "scratch");

      std::string jsonl;
      std::string csv = episode_csv_header() + "\n";
      nlohmann::json reasons = nlohmann::json::object();
      bool policy_failed = false;
      for (std::size_t i = 0; i < logs.size(); ++i) {
        jsonl += to_json(logs[i]).dump() + "\n";
        csv += episode_csv_row(logs[i], static_cast<int>(i)) + "\n";
        const std::string reason{to_string(logs[i].reason)};
        reasons[reason] = reasons.value(reason, 0) + 1;
        policy_failed = policy_failed || logs[i].reason == Termination::policy_failure;
      }
      nlohmann::json summary = to_json(summarize(logs));
      summary["terminations"] = reasons;
      summary["policy"] = fly_policy;
      summary["scene"] = scene.name;
      summary["config"] = to_json(config);
      write_text(out / "episodes.jsonl", jsonl);
      write_text(out / "episodes.csv", csv);
      write_text(out / "summary.json", summary.dump(2) + "\n");
      fmt::print("{}\n", summary.dump(2));
      if (policy_failed && fly_policy.starts_with("external:")) {
        spdlog::error("external policy failed; see failure fields in episodes.jsonl");
        return kExternalPolicy;
      }
    } else if (*compare) {
      if (cmp_seed) {
        config.seed = *cmp_seed;
      }
      cmp.sparse_aggregation = cmp_sparse_agg == "weighted" ? Aggregation::weighted : Aggregation::argmax;
      cmp.dense_aggregation = cmp_dense_agg == "weighted" ? Aggregation::weighted : Aggregation::argmax;
      const SceneDescription scene = load_scene_arg(cmp_scene);
      const CompareResult r = compare_k(scene, config, cmp);
      nlohmann::json doc = to_json(r, cmp);
      doc["scene"] = scene.name;
      write_text(cmp_out, doc.dump(2) + "\n");
      fmt::print("{}\n", doc.dump(2));
    } else if (*validate_cmd) {
      const ValidationReport report = validate_dataset(val_path);
      for (const auto& p : report.problems) {
        fmt::print(stderr, "{}\n", p);
      }
      fmt::print("{}: {} samples, {} fallbacks, {}\n", val_path, report.samples, report.fallbacks,
                 report.ok() ? "valid" : fmt::format("{} problems", report.problems.size()));
      return report.ok() ? kOk : kConfig;
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  } catch (const SceneError& e) {
    spdlog::error("{}", e.what());
    return kScene;
  } catch (const PolicyError& e) {
    spdlog::error("{}", e.what());
    return kExternalPolicy;
  } catch (const DomainError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return kOk;
}
