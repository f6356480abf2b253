#include <doctest.h>

#include <chrono>

#include "pixnav/errors.hpp"
#include "pixnav/external_policy.hpp"
#include "support.hpp"

using namespace pixnav;
using namespace pixnav::testing;

namespace {

std::unique_ptr<Policy> fixture(const std::string& mode, std::chrono::milliseconds timeout = std::chrono::seconds(20)) {
  ExternalPolicyOptions o;
  o.command = "python3 " PIXNAV_SOURCE_DIR "/tests/fixtures/policy.py " + mode;
  o.timeout = timeout;
  return external_policy(o);
}

EpisodeConfig small() {
  EpisodeConfig cfg;
  cfg.intrinsics = CameraIntrinsics::square(32, 90.0);
  cfg.max_steps = 4;
  return cfg;
}

const Pose kStart{{1, 5, 1.5}, 0.0};

}  // namespace

TEST_CASE("request and reply lines") {
  const auto req = make_policy_request(3, 224, 224, "/d.f32", "/g.f32");
  CHECK(req["step"] == 3);
  CHECK(req["depth_raster_path"] == "/d.f32");
  CHECK(req["gradmap_path"] == "/g.f32");
  const auto k = CameraIntrinsics::square(224, 90.0);
  const auto ins = parse_policy_reply(R"({"goto": [10, 20.5], "lookat": [223, 0]})", k);
  CHECK(ins.goto_px == PixelCoord{10, 20.5});
  CHECK(ins.lookat_px == PixelCoord{223, 0});
  CHECK_THROWS_AS(parse_policy_reply("{", k), PolicyError);
  CHECK_THROWS_AS(parse_policy_reply(R"({"error": "boom"})", k), PolicyError);
  CHECK_THROWS_AS(parse_policy_reply(R"({"goto": [10, 20]})", k), PolicyError);
  CHECK_THROWS_AS(parse_policy_reply(R"({"goto": [10, "a"], "lookat": [0, 0]})", k), PolicyError);
  CHECK_THROWS_AS(parse_policy_reply(R"({"goto": [224, 0], "lookat": [0, 0]})", k), PolicyError);
}

TEST_CASE("external center policy matches the built-in one") {
  const auto s = room(20, 10, 3);
  auto ext = fixture("center");
  auto ref = center_policy();
  const auto a = run_episode(s, *ext, kStart, {}, small());
  const auto b = run_episode(s, *ref, kStart, {}, small());
  CHECK(a.reason == Termination::max_steps);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i].after == b.steps[i].after);
}

TEST_CASE("protocol errors end the episode as policy failures") {
  const auto s = room(20, 10, 3);
  for (const char* mode : {"error", "garbage", "outside", "exit"}) {
    CAPTURE(mode);
    auto p = fixture(mode);
    const auto log = run_episode(s, *p, kStart, {}, small());
    CHECK(log.reason == Termination::policy_failure);
    CHECK_FALSE(log.failure.empty());
  }
}

TEST_CASE("an unresponsive policy times out") {
  const auto s = room(20, 10, 3);
  auto p = fixture("hang", std::chrono::milliseconds(1500));
  const auto t0 = std::chrono::steady_clock::now();
  const auto log = run_episode(s, *p, kStart, {}, small());
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(log.reason == Termination::policy_failure);
  CHECK(log.steps.size() == 1);
  CHECK(elapsed < std::chrono::seconds(15));
}
