#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pixnav/datagen.hpp"
#include "pixnav/errors.hpp"
#include "pixnav/raster_io.hpp"
#include "support.hpp"

using namespace pixnav;
using namespace pixnav::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("pixnav-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sampled poses keep their clearance") {
  const auto s = load_scene(PIXNAV_SOURCE_DIR "/scenes/apartment.json");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Pose p = sample_pose(s, rng);
    CHECK(s.bounds.contains_closed(p.position));
    CHECK(clearance(s, p.position) >= 0.5);
  }
  PoseSampling planar;
  planar.planar = true;
  CHECK(sample_pose(s, rng, planar).position.z == 1.5);
}

TEST_CASE("pose sampling gives up after the draw cap") {
  const auto s = room(0.8, 0.8, 0.8);
  std::mt19937_64 rng(1);
  PoseSampling o;
  o.max_draws = 50;
  CHECK_THROWS_AS(sample_pose(s, rng, o), SceneError);
}

TEST_CASE("empty dataset") {
  const auto out = scratch("empty");
  const auto s = load_scene(PIXNAV_SOURCE_DIR "/scenes/apartment.json");
  const auto sum = generate_dataset(s, {}, {}, out);
  CHECK(sum.count == 0);
  CHECK(fs::exists(out / "manifest.jsonl"));
  CHECK(slurp(out / "manifest.jsonl").empty());
  CHECK(validate_dataset(out).ok());
}

TEST_CASE("dataset layout, determinism and validation") {
  const auto s = load_scene(PIXNAV_SOURCE_DIR "/scenes/apartment.json");
  RunConfig c;
  c.width = c.height = 64;
  c.seed = 11;
  DatagenOptions o;
  o.count = 12;
  const auto a = scratch("a"), b = scratch("b");
  const auto sa = generate_dataset(s, c, o, a);
  generate_dataset(s, c, o, b);
  CHECK(sa.count == 12);
  CHECK(slurp(a / "manifest.jsonl") == slurp(b / "manifest.jsonl"));
  CHECK(slurp(a / "depth/000005.f32") == slurp(b / "depth/000005.f32"));

  const auto report = validate_dataset(a);
  for (const auto& p : report.problems) MESSAGE(p);
  CHECK(report.ok());
  CHECK(report.samples == 12);

  std::ifstream in(a / "manifest.jsonl");
  std::string line;
  std::set<std::pair<double, double>> labels;
  while (std::getline(in, line)) {
    const auto smp = sample_from_json(nlohmann::json::parse(line));
    const auto depth = read_raster(a / smp.depth_path);
    CHECK(depth.width == 64);
    CHECK(depth.channels == 1);
    CHECK(read_raster(a / smp.grad_path).channels == 2);
    CHECK(fs::exists(a / smp.color_path));
    labels.insert({smp.goto_px.x, smp.goto_px.y});
  }
  CHECK(labels.size() > 1);  // labels vary with the pose

  // Corrupt one gradient raster: the validator notices.
  auto g = read_raster(a / "grad/000003.f32");
  g.values[0] += 1.0f;
  write_raster(a / "grad/000003.f32", g);
  CHECK_FALSE(validate_dataset(a).ok());
  fs::remove(a / "depth/000004.f32");
  CHECK(validate_dataset(a).problems.size() >= 2);
}

TEST_CASE("fallback labels are a minority at the published settings" * doctest::test_suite("slow")) {
  const auto s = load_scene(PIXNAV_SOURCE_DIR "/scenes/apartment.json");
  RunConfig c;
  c.seed = 5;
  DatagenOptions o;
  o.count = 40;
  const auto out = scratch("fallback");
  const auto sum = generate_dataset(s, c, o, out);
  MESSAGE("fallback fraction " << sum.fallback_fraction());
  CHECK(sum.fallback_fraction() < 0.5);
  fs::remove_all(out);
}
