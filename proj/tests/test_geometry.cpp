#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pixnav/errors.hpp"
#include "pixnav/geometry.hpp"

using namespace pixnav;
using std::numbers::pi;

TEST_CASE("back_project center pixel is the principal axis") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const Vec3 d = back_project({111.5, 111.5}, k);
  CHECK(d.x == doctest::Approx(0.0));
  CHECK(d.y == doctest::Approx(0.0));
  CHECK(d.z == doctest::Approx(1.0));
}

TEST_CASE("back_project right edge pixel") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const Vec3 d = back_project({223.0, 111.5}, k);
  CHECK(d.y == 0.0);
  CHECK(d.x / d.z == doctest::Approx((223.0 - 111.5) / 112.0).epsilon(1e-12));
  CHECK(norm(d) == doctest::Approx(1.0).epsilon(1e-12));
  // Half-width offset is exactly 45 degrees.
  const Vec3 e = back_project({223.5, 111.5}, k);
  CHECK(std::abs(std::atan2(e.x, e.z) - pi / 4) < 1e-12);
}

TEST_CASE("back_project rejects out-of-image pixels") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  CHECK_THROWS_AS(back_project({-3.0, 10.0}, k), DomainError);
  CHECK_THROWS_AS(back_project({10.0, 400.0}, k), DomainError);
}

TEST_CASE("project known directions") {
  const auto k = CameraIntrinsics::square(224, 90.0);
  const PixelCoord c = project({0, 0, 1}, k);
  CHECK(c.x == 111.5);
  CHECK(c.y == 111.5);
  CHECK(project({1, 0, 1}, k).x == doctest::Approx(223.5).epsilon(1e-12));
  CHECK(project({0, -1, 1}, k).y == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(project({0, 0, -1}, k), BehindCameraError);
  CHECK_THROWS_AS(project({1, 0, 0}, k), BehindCameraError);
}

TEST_CASE("project inverts back_project on random pixels") {
  const CameraIntrinsics k(160, 120, 1.3, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0, 159), uy(0, 119);
  for (int i = 0; i < 1000; ++i) {
    const PixelCoord p{ux(rng), uy(rng)};
    const Vec3 d = back_project(p, k);
    CHECK(std::abs(norm(d) - 1.0) < 1e-9);
    const PixelCoord q = project(d, k);
    CHECK(pixel_distance(p, q) < 1e-6);
  }
}

TEST_CASE("camera_to_world conventions") {
  const Vec3 fwd{0, 0, 1};
  const Vec3 w0 = camera_to_world(fwd, {{}, 0.0});
  CHECK(w0.x == doctest::Approx(1.0));
  CHECK(w0.y == doctest::Approx(0.0));
  // Camera right at yaw 0 is world -y; image down is world -z.
  CHECK(camera_to_world({1, 0, 0}, {{}, 0.0}).y == doctest::Approx(-1.0));
  CHECK(camera_to_world({0, 1, 0}, {{}, 0.0}).z == doctest::Approx(-1.0));

  const Pose right{{}, pi / 2};
  const Vec3 turned = camera_to_world(fwd, right);
  CHECK(turned.y == doctest::Approx(-1.0));  // positive yaw turns clockwise seen from above
  const Vec3 back = camera_to_world(world_to_camera(turned, right), right);
  CHECK(distance(back, turned) < 1e-12);
  CHECK(distance(world_to_camera(turned, right), fwd) < 1e-12);

  const Vec3 v{0.3, -0.7, 0.2};
  const Pose half{{}, pi};
  const Vec3 twice = camera_to_world(world_to_camera(camera_to_world(v, half), {{}, 0.0}), half);
  CHECK(std::abs(norm(twice) - norm(v)) < 1e-12);
}

TEST_CASE("camera_to_world preserves length and vertical component") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1), yaw(-pi, pi);
  for (int i = 0; i < 500; ++i) {
    const Vec3 d{u(rng), u(rng), u(rng)};
    const Pose pose{{}, yaw(rng)};
    const Vec3 w = camera_to_world(d, pose);
    CHECK(std::abs(norm(w) - norm(d)) < 1e-12);
    CHECK(w.z == -d.y);
  }
}

TEST_CASE("yaw_of") {
  CHECK(yaw_of({1, 0, 0}) == 0.0);
  CHECK(yaw_of({1, -1, 0}) == doctest::Approx(pi / 4).epsilon(1e-15));
  CHECK(yaw_of({1, 1, 5}) == doctest::Approx(-pi / 4).epsilon(1e-15));
  CHECK(yaw_of({-1, 0, 0}) == doctest::Approx(pi));
  CHECK_THROWS_AS(yaw_of({0, 0, -1}), DegenerateDirectionError);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> yaw(-pi + 1e-6, pi - 1e-6);
  for (int i = 0; i < 500; ++i) {
    const Pose pose{{1, 2, 3}, yaw(rng)};
    CHECK(std::abs(yaw_of(forward_of(pose)) - pose.yaw) < 1e-9);
  }
}

TEST_CASE("normalize_angle wraps into (-pi, pi]") {
  CHECK(normalize_angle(pi) == pi);
  CHECK(normalize_angle(-pi) == pi);
  CHECK(normalize_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(normalize_angle(0.25) == 0.25);
}

TEST_CASE("intrinsics validation") {
  CHECK_THROWS_AS(CameraIntrinsics(0, 10, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(CameraIntrinsics(10, 10, pi, 1.0), DomainError);
  const auto k = CameraIntrinsics::square(224, 90.0);
  CHECK(k.fx() == doctest::Approx(112.0).epsilon(1e-12));
  CHECK(k.diagonal() == doctest::Approx(std::sqrt(2.0) * 224));
}
