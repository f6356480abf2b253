#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pixnav/color.hpp"
#include "pixnav/errors.hpp"
#include "pixnav/instruct.hpp"
#include "pixnav/scene.hpp"
#include "pixnav/scene_gen.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pixnav;
using namespace pixnav::testing;

TEST_CASE("candidate grid positions") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const auto g = CandidateGrid::uniform(3, 3, k);
  REQUIRE(g.size() == 9);
  CHECK(g.pixels[0].x == doctest::Approx(224.0 / 6).epsilon(1e-15));
  CHECK(g.pixels[1].x == 112.0);
  CHECK(g.pixels[2].x == doctest::Approx(5 * 224.0 / 6).epsilon(1e-15));
  CHECK(g.pixels[3].y == 112.0);
  CHECK(g.pixels[0].x == doctest::Approx(37.33).epsilon(1e-3));
  CHECK(g.pixels[2].x == doctest::Approx(186.67).epsilon(1e-3));
  const auto row = CandidateGrid::middle_row(3, k);
  REQUIRE(row.size() == 3);
  CHECK(row.pixels[1].y == 112.0);
  CHECK_THROWS_AS(CandidateGrid::uniform(0, 3, k), DomainError);
}

TEST_CASE("candidate poses lie one unit away") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const Pose pose{{1, 2, 3}, 0.4};
  const auto poses = candidate_poses(pose, CandidateGrid::uniform(3, 3, k), k);
  for (const auto& p : poses) {
    CHECK(distance(p.position, pose.position) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.yaw == pose.yaw);
  }
  // Principal-axis candidate moves straight ahead.
  const CandidateGrid center{1, 1, {{111.5, 111.5}}};
  const auto ahead = candidate_poses(pose, center, k);
  CHECK(distance(ahead[0].position, pose.position + forward_of(pose)) < 1e-12);
}

TEST_CASE("weights") {
  const std::vector<std::size_t> n{3, 4};
  const auto w = weights(n);
  REQUIRE(w);
  CHECK(std::abs((*w)[0] - 9.0 / 25.0) < 1e-12);
  CHECK(std::abs((*w)[1] - 16.0 / 25.0) < 1e-12);
  CHECK_FALSE(weights(std::vector<std::size_t>{0, 0, 0}));
  const auto one_hot = weights(std::vector<std::size_t>{0, 7, 0});
  CHECK(*one_hot == std::vector<double>{0, 1, 0});
  const auto uniform9 = weights(std::vector<std::size_t>(9, 12));
  for (double v : *uniform9) CHECK(std::abs(v - 1.0 / 9) < 1e-15);
}

TEST_CASE("weights are scale invariant and sum to one") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::size_t> n(9);
    for (auto& v : n) v = rng() % 5000;
    n[rng() % 9] += 1;
    auto scaled = n;
    for (auto& v : scaled) v *= 7;
    const auto a = *weights(n);
    const auto b = *weights(scaled);
    double sum = 0;
    for (std::size_t j = 0; j < 9; ++j) {
      CHECK(std::abs(a[j] - b[j]) < 1e-12);
      CHECK(a[j] >= 0.0);
      CHECK(a[j] <= 1.0);
      sum += a[j];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("goto and lookat pixels") {
  const CandidateGrid two{2, 1, {{224.0 / 6, 112}, {5 * 224.0 / 6, 112}}};
  const std::vector<double> w{0.25, 0.75};
  const PixelCoord g = goto_pixel(w, two);
  CHECK(std::abs(g.x - (0.25 * 224.0 / 6 + 0.75 * 5 * 224.0 / 6)) < 1e-12);
  CHECK(g.x == doctest::Approx(149.33).epsilon(1e-4));
  CHECK(g.y == 112.0);

  const std::vector<UnseenStats> stats{{5, PixelCoord{10, 10}}, {5, PixelCoord{60, 35}}};
  const std::vector<double> w2{9.0 / 25, 16.0 / 25};
  const PixelCoord l = lookat_pixel(w2, stats);
  CHECK(std::abs(l.x - 42.0) < 1e-12);
  CHECK(std::abs(l.y - 26.0) < 1e-12);

  const std::vector<UnseenStats> single{{0, std::nullopt}, {9, PixelCoord{3.5, 7.25}}};
  CHECK(lookat_pixel(*weights(std::span<const UnseenStats>(single)), single) == PixelCoord{3.5, 7.25});

  const auto k = CameraIntrinsics::square(224, 90.0);
  const auto grid = CandidateGrid::uniform(3, 3, k);
  const PixelCoord center = goto_pixel(*weights(std::vector<std::size_t>(9, 1)), grid);
  CHECK(std::abs(center.x - 112.0) < 1e-12);  // the literal grid is centered on 112, half a pixel off the axis
  std::vector<double> hot(9, 0.0);
  hot[5] = 1.0;
  CHECK(goto_pixel(hot, grid) == grid.pixels[5]);
}

TEST_CASE("goto converges to a dominant candidate") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const auto grid = CandidateGrid::uniform(3, 3, k);
  std::vector<std::size_t> n{40, 10, 30, 20, 50, 10, 5, 25, 15};
  double last = 1e9;
  for (int step = 0; step < 30; ++step) {
    n[6] = 5 + static_cast<std::size_t>(step) * 100;
    const double dist = pixel_distance(goto_pixel(*weights(n), grid), grid.pixels[6]);
    CHECK(dist <= last);
    last = dist;
  }
  CHECK(last < 1.0);
}

TEST_CASE("classify_unseen") {
  CHECK(delta_e76(Rgb{255, 0, 0}, Rgb{0, 255, 0}) == doctest::Approx(170.58).epsilon(1e-3));
  ColorImage img(8, 8, Rgb{128, 128, 128});
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 4; ++x) img(x, y) = kPaintRed;
  }
  const auto c = classify_unseen(img, 65.0);
  CHECK(c.stats.count == 32);
  REQUIRE(c.stats.center);
  CHECK(c.stats.center->x == 5.5);
  CHECK(c.stats.center->y == 3.5);
  CHECK(c.unseen(0, 0) == 0);
  CHECK(c.unseen(7, 7) == 1);

  ColorImage green(2, 2, Rgb{0, 255, 0});
  CHECK(classify_unseen(green, 65.0).stats.count == 4);
  ColorImage background(3, 3, kBackground);
  const auto b = classify_unseen(background, 65.0);
  CHECK(b.stats.count == 0);
  CHECK_FALSE(b.stats.center);
  // A color exactly at the threshold counts as seen.
  const Rgb near{200, 40, 40};
  ColorImage one(1, 1, near);
  const double de = delta_e76(near, kPaintRed);
  CHECK(classify_unseen(one, de).stats.count == 0);
  CHECK(classify_unseen(one, std::nextafter(de, 0.0)).stats.count == 1);
}

TEST_CASE("fallback threshold is strict") {
  const auto k = CameraIntrinsics::square(100, 90.0);  // 10,000 pixels: 1.5% = 150
  const CandidateGrid grid{2, 1, {{25, 50}, {75, 50}}};
  DepthImage depth(100, 100, 1.0);
  depth(30, 40) = 7.0;
  depth(60, 40) = 7.0;  // tie: lowest row-major index wins
  CandidateEvaluation eval{{{150, PixelCoord{10, 10}}, {20, PixelCoord{90, 90}}}, {0, 0}};
  const auto at = aggregate(eval, grid, depth, k, {});
  CHECK_FALSE(at.fallback);
  eval.stats[0].count = 149;
  const auto below = aggregate(eval, grid, depth, k, {});
  CHECK(below.fallback);
  CHECK(below.goto_px == PixelCoord{30, 40});
  CHECK(below.lookat_px == PixelCoord{30, 40});
  CHECK(argmax_depth_pixel(depth) == PixelCoord{30, 40});
}

TEST_CASE("argmax aggregation picks the best candidate") {
  const auto k = CameraIntrinsics::square(100, 90.0);
  const CandidateGrid grid{2, 1, {{25, 50}, {75, 50}}};
  const DepthImage depth(100, 100, 1.0);
  const CandidateEvaluation eval{{{400, PixelCoord{10, 10}}, {900, PixelCoord{90, 80}}}, {0, 0}};
  InstructParams p;
  p.aggregation = Aggregation::argmax;
  const auto ins = aggregate(eval, grid, depth, k, p);
  CHECK(ins.goto_px == PixelCoord{75, 50});
  CHECK(ins.lookat_px == PixelCoord{90, 80});
}

TEST_CASE("fallback facing a wall with a doorway") {
  const auto s = doorway_scene();
  const auto k = CameraIntrinsics::square(64, 90.0);
  const Pose pose = kDoorwayPose;
  const auto grid = CandidateGrid::uniform(3, 3, k);

  PaintStore paint;
  const auto result = infer(s, paint, pose, k, grid, {});
  // Exhaustive check of the rule with the candidate counts.
  std::size_t max_n = 0;
  for (const auto& st : result.candidates.stats) max_n = std::max(max_n, st.count);
  const bool expect_fallback = static_cast<double>(max_n) / k.pixel_count() < 0.015;
  CHECK(result.instruction.fallback == expect_fallback);
  CHECK(result.instruction.fallback);
  const PixelCoord deepest = argmax_depth_pixel(result.depth);
  CHECK(result.instruction.goto_px == deepest);
  CHECK(result.instruction.lookat_px == deepest);
  // The deepest pixel looks out through the doorway.
  CHECK(result.depth(static_cast<int>(deepest.x), static_cast<int>(deepest.y)) == kFarPlane);
  CHECK(through_doorway(deepest, pose, k));
}

TEST_CASE("candidates inside geometry are blocked") {
  const auto s = room(6, 6, 3);
  const auto k = CameraIntrinsics::square(32, 90.0);
  const Pose pose{{5.6, 3, 1.5}, 0.0};  // 0.4 from the +x wall
  PaintStore paint;
  const auto r = infer(s, paint, pose, k, CandidateGrid::uniform(3, 3, k), {});
  for (std::size_t i = 0; i < r.candidates.blocked.size(); ++i) {
    CHECK(r.candidates.blocked[i] == 1);
    CHECK(r.candidates.stats[i].count == 0);
  }
  CHECK(r.instruction.fallback);
}

TEST_CASE("symmetric room puts goto on the center column") {
  const auto s = room(10, 10, 4);
  const auto k = CameraIntrinsics::square(64, 90.0);
  const Pose pose{{2, 5, 2}, 0.0};
  PaintStore paint;
  const auto r = infer(s, paint, pose, k, CandidateGrid::uniform(3, 3, k), {});
  REQUIRE_FALSE(r.instruction.fallback);
  // The candidate grid is centered on W/2 = 32, half a pixel right of the axis.
  CHECK(std::abs(r.instruction.goto_px.x - 31.5) < 1.0);
  CHECK(std::abs(r.instruction.lookat_px.x - 31.5) < 1.0);
}

TEST_CASE("corridor corner attracts the oracle") {
  const auto s = load_scene(PIXNAV_SOURCE_DIR "/scenes/corridor.json");
  const auto k = CameraIntrinsics::square(112, 90.0);
  // Just before the corner, looking down the first leg; the second leg opens
  // on the left (world +y).
  const Pose pose{{7.0, 1.0, 1.5}, 0.0};
  PaintStore paint;
  const auto grid = CandidateGrid::uniform(3, 3, k);
  const auto r = infer(s, paint, pose, k, grid, {});
  REQUIRE_FALSE(r.instruction.fallback);
  std::size_t left = 0, right = 0;
  for (int j = 0; j < 3; ++j) {
    left += r.candidates.stats[3 * j].count;
    right += r.candidates.stats[3 * j + 2].count;
  }
  CHECK(left > 5 * right);
  CHECK(r.instruction.goto_px.x < k.cx() - 20.0);
  CHECK(r.instruction.lookat_px.x < k.cx());
  // Goto stays inside the hull of the candidate pixels.
  CHECK(r.instruction.goto_px.x >= grid.pixels.front().x);
}

TEST_CASE("color jitter stays classifiable") {
  const auto s = room(6, 6, 3);
  const auto k = CameraIntrinsics::square(32, 90.0);
  const Pose pose{{3, 3, 1.5}, 0.2};
  PaintStore paint;
  RenderOptions jitter{12, 4};
  const ColorImage img = render_color(s, paint, pose, k, jitter);
  CHECK(classify_unseen(img, 65.0).stats.count == static_cast<std::size_t>(k.pixel_count()));
  paint_view(paint, render_depth(s, pose, k), pose, k);
  const ColorImage red = render_color(s, paint, pose, k, jitter);
  CHECK(classify_unseen(red, 65.0).stats.count < static_cast<std::size_t>(k.pixel_count()) / 50);
}
