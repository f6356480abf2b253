#include "pixnav/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "pixnav/errors.hpp"
#include "pixnav/flight.hpp"
#include "pixnav/gradmap.hpp"
#include "pixnav/parallel.hpp"
#include "pixnav/raster_io.hpp"
#include "pixnav/serialize.hpp"

namespace pixnav {

namespace fs = std::filesystem;

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Pose sample_pose(const SceneDescription& scene, std::mt19937_64& rng, const PoseSampling& opts) {
  const AABox& b = scene.bounds;
  for (int draw = 0; draw < opts.max_draws; ++draw) {
    const double x = b.min.x + unit_draw(rng) * (b.max.x - b.min.x);
    const double y = b.min.y + unit_draw(rng) * (b.max.y - b.min.y);
    const double z = opts.planar ? opts.altitude : b.min.z + unit_draw(rng) * (b.max.z - b.min.z);
    // 1 - u lies in (0, 1], giving yaw in (-pi, pi].
    const double yaw = -std::numbers::pi + (1.0 - unit_draw(rng)) * 2.0 * std::numbers::pi;
    const Vec3 p{x, y, z};
    if (!inside_geometry(scene, p) && clearance(scene, p) >= opts.clearance) {
      return {p, yaw};
    }
  }
  throw SceneError(fmt::format("no free pose with clearance {} after {} draws", opts.clearance, opts.max_draws));
}

nlohmann::json to_json(const DataSample& s) {
  return {{"id", s.id},           {"scene", s.scene},         {"pose", to_json(s.pose)},
          {"depth", s.depth_path}, {"grad", s.grad_path},     {"color", s.color_path},
          {"goto", to_json(s.goto_px)}, {"lookat", to_json(s.lookat_px)}, {"fallback", s.fallback}};
}

DataSample sample_from_json(const nlohmann::json& j) {
  DataSample s;
  s.id = j.at("id").get<std::size_t>();
  s.scene = j.at("scene").get<std::string>();
  s.pose = pose_from_json(j.at("pose"));
  s.depth_path = j.at("depth").get<std::string>();
  s.grad_path = j.at("grad").get<std::string>();
  s.color_path = j.at("color").get<std::string>();
  s.goto_px = pixel_from_json(j.at("goto"));
  s.lookat_px = pixel_from_json(j.at("lookat"));
  s.fallback = j.at("fallback").get<bool>();
  return s;
}

namespace {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

struct Writer {
  const SceneDescription& scene;
  const CameraIntrinsics& k;
  fs::path root;

  DataSample write(std::size_t id, const Pose& pose, const DepthImage& depth, const Instruction& ins) const {
    DataSample s;
    s.id = id;
    s.scene = scene.name;
    s.pose = pose;
    s.depth_path = fmt::format("depth/{:06}.f32", id);
    s.grad_path = fmt::format("grad/{:06}.f32", id);
    s.color_path = fmt::format("color/{:06}.png", id);
    s.goto_px = ins.goto_px;
    s.lookat_px = ins.lookat_px;
    s.fallback = ins.fallback;
    try {
      const FloatRaster stored = depth_to_raster(depth);
      write_raster(root / s.depth_path, stored);
      // Gradients of the depth as stored, so the validator reproduces them exactly.
      write_raster(root / s.grad_path, gradmap_to_raster(sobel(raster_to_depth(stored))));
      const PaintStore none;
      write_png(root / s.color_path, render_color(scene, none, pose, k));
    } catch (const std::exception& e) {
      throw IoError(fmt::format("sample {}: {}", id, e.what()));
    }
    return s;
  }
};

}  // namespace

DatasetSummary generate_dataset(const SceneDescription& scene, const RunConfig& config, const DatagenOptions& options,
                                const fs::path& out) {
  validate(config);
  for (const char* dir : {"depth", "grad", "color"}) {
    fs::create_directories(out / dir);
  }
  const CameraIntrinsics k = config.intrinsics();
  const CandidateGrid grid = config.candidate_grid();
  const InstructParams params = config.instruct_params();
  const PoseSampling sampling{0.5, 10000, config.mode == FlightMode::planar, config.altitude};
  const Writer writer{scene, k, out};

  std::vector<DataSample> samples(options.count);
  if (!options.trajectory) {
    parallel_for(options.count, [&](std::size_t i) {
      auto rng = stream_rng(config.seed, i);
      const Pose pose = sample_pose(scene, rng, sampling);
      PaintStore paint(config.cover_radius);
      const InferResult r = infer(scene, paint, pose, k, grid, params);
      samples[i] = writer.write(i, pose, r.depth, r.instruction);
    });
  } else {
    const auto length = static_cast<std::size_t>(std::max(1, options.trajectory_length));
    const std::size_t trajectories = (options.count + length - 1) / length;
    parallel_for(trajectories, [&](std::size_t t) {
      auto rng = stream_rng(config.seed, t);
      std::optional<Pose> pose;
      PaintStore paint(config.cover_radius);
      for (std::size_t i = t * length; i < std::min(options.count, (t + 1) * length); ++i) {
        if (!pose) {
          pose = sample_pose(scene, rng, sampling);
          paint = PaintStore(config.cover_radius);
        }
        const InferResult r = infer(scene, paint, *pose, k, grid, params);
        samples[i] = writer.write(i, *pose, r.depth, r.instruction);
        MotionOptions motion;
        motion.planar = sampling.planar;
        motion.goto_post_rotation = config.goto_post_rotation;
        const Pose next = apply_instruction(*pose, r.instruction, k, config.step_length, motion);
        const bool blocked = !scene.bounds.contains_closed(next.position) || inside_geometry(scene, next.position) ||
                             segment_collides(scene, pose->position, next.position, config.collision_inflate);
        if (blocked) {
          pose.reset();
        } else {
          pose = next;
        }
      }
    });
  }

  DatasetSummary summary;
  summary.count = samples.size();
  {
    std::ofstream manifest(out / "manifest.jsonl", std::ios::binary);
    for (const auto& s : samples) {
      manifest << to_json(s).dump() << '\n';
      summary.fallbacks += s.fallback ? 1 : 0;
    }
    if (!manifest) {
      throw IoError(fmt::format("cannot write {}", (out / "manifest.jsonl").string()));
    }
  }
  const nlohmann::json meta{
      {"format", "pixnav-dataset/1"},
      {"scene", scene.name},
      {"seed", config.seed},
      {"count", summary.count},
      {"fallbacks", summary.fallbacks},
      {"fallback_fraction", summary.fallback_fraction()},
      {"mode", to_string(config.mode)},
      {"trajectory", options.trajectory},
      {"intrinsics", {{"width", k.width()}, {"height", k.height()}, {"hfov_deg", config.hfov_deg},
                      {"vfov_deg", config.vfov_deg}}},
      {"config", to_json(config)}};
  std::ofstream(out / "dataset.json", std::ios::binary) << meta.dump(2) << '\n';
  spdlog::info("dataset {}: {} samples, fallback fraction {:.3f}", out.string(), summary.count,
               summary.fallback_fraction());
  return summary;
}

ValidationReport validate_dataset(const fs::path& root) {
  ValidationReport report;
  auto problem = [&](std::string msg) { report.problems.push_back(std::move(msg)); };

  nlohmann::json meta;
  try {
    std::ifstream in(root / "dataset.json");
    if (!in) {
      problem("missing dataset.json");
      return report;
    }
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    problem(fmt::format("dataset.json: {}", e.what()));
    return report;
  }
  const auto width = meta.at("intrinsics").at("width").get<int>();
  const auto height = meta.at("intrinsics").at("height").get<int>();

  std::ifstream manifest(root / "manifest.jsonl");
  if (!manifest) {
    problem("missing manifest.jsonl");
    return report;
  }
  std::string line;
  std::size_t expected_id = 0;
  while (std::getline(manifest, line)) {
    const std::size_t row = expected_id++;
    DataSample s;
    try {
      s = sample_from_json(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      problem(fmt::format("manifest line {}: {}", row + 1, e.what()));
      continue;
    }
    ++report.samples;
    report.fallbacks += s.fallback ? 1 : 0;
    if (s.id != row) {
      problem(fmt::format("sample {}: id {} out of sequence", row, s.id));
    }
    for (const auto& [name, p] : {std::pair{"goto", s.goto_px}, std::pair{"lookat", s.lookat_px}}) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0 || p.y < 0 || p.x > width - 1 || p.y > height - 1) {
        problem(fmt::format("sample {}: {} label ({}, {}) out of bounds", s.id, name, p.x, p.y));
      }
    }
    try {
      const FloatRaster depth = read_raster(root / s.depth_path);
      const FloatRaster grad = read_raster(root / s.grad_path);
      if (depth.width != static_cast<std::uint32_t>(width) || depth.height != static_cast<std::uint32_t>(height) ||
          depth.channels != 1) {
        problem(fmt::format("sample {}: depth raster has wrong shape", s.id));
        continue;
      }
      if (grad != gradmap_to_raster(sobel(raster_to_depth(depth)))) {
        problem(fmt::format("sample {}: gradient raster differs from the Sobel response of its depth", s.id));
      }
      const ColorImage color = read_png(root / s.color_path);
      if (color.width() != width || color.height() != height) {
        problem(fmt::format("sample {}: color image has wrong shape", s.id));
      }
    } catch (const std::exception& e) {
      problem(fmt::format("sample {}: {}", s.id, e.what()));
    }
  }
  if (meta.at("count").get<std::size_t>() != report.samples) {
    problem(fmt::format("dataset.json lists {} samples, manifest has {}", meta.at("count").get<std::size_t>(),
                        report.samples));
  }
  return report;
}

}  // namespace pixnav
