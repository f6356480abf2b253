#include "pixnav/geometry.hpp"

#include <fmt/format.h>

namespace pixnav {

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0)) {
    throw DomainError("cannot normalize a zero-length vector");
  }
  return v / n;
}

CameraIntrinsics::CameraIntrinsics(int width, int height, double hfov, double vfov)
    : width_(width), height_(height), hfov_(hfov), vfov_(vfov) {
  if (width <= 0 || height <= 0) {
    throw DomainError(fmt::format("image size must be positive, got {}x{}", width, height));
  }
  if (!(hfov > 0.0 && hfov < std::numbers::pi) || !(vfov > 0.0 && vfov < std::numbers::pi)) {
    throw DomainError("field of view must lie in (0, pi)");
  }
  fx_ = (width / 2.0) / std::tan(hfov / 2.0);
  fy_ = (height / 2.0) / std::tan(vfov / 2.0);
}

CameraIntrinsics CameraIntrinsics::square(int size, double fov_degrees) {
  const double fov = fov_degrees * std::numbers::pi / 180.0;
  return CameraIntrinsics(size, size, fov, fov);
}

bool CameraIntrinsics::contains(const PixelCoord& p) const {
  return p.x >= 0.0 && p.x <= width_ - 1.0 && p.y >= 0.0 && p.y <= height_ - 1.0;
}

bool CameraIntrinsics::within_sensor(const PixelCoord& p) const {
  return p.x >= -0.5 && p.x <= width_ - 0.5 && p.y >= -0.5 && p.y <= height_ - 0.5;
}

double normalize_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(radians, two_pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) {
    a += two_pi;
  }
  return a;
}

Pose make_pose(const Vec3& position, double yaw) { return Pose{position, normalize_angle(yaw)}; }

Vec3 back_project(const PixelCoord& p, const CameraIntrinsics& k) {
  if (!k.within_sensor(p)) {
    throw DomainError(fmt::format("pixel ({}, {}) outside {}x{} image", p.x, p.y, k.width(), k.height()));
  }
  const Vec3 ray{(p.x - k.cx()) / k.fx(), (p.y - k.cy()) / k.fy(), 1.0};
  return ray / norm(ray);
}

PixelCoord project(const Vec3& d, const CameraIntrinsics& k) {
  if (!(d.z > 0.0)) {
    throw BehindCameraError("direction is not in front of the camera");
  }
  return {k.cx() + k.fx() * d.x / d.z, k.cy() + k.fy() * d.y / d.z};
}

namespace {

struct Basis {
  Vec3 forward;
  Vec3 right;
};

Basis basis_of(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {{c, -s, 0.0}, {-s, -c, 0.0}};
}

}  // namespace

Vec3 camera_to_world(const Vec3& d, const Pose& pose) {
  const Basis b = basis_of(pose.yaw);
  return {b.forward.x * d.z + b.right.x * d.x, b.forward.y * d.z + b.right.y * d.x, -d.y};
}

Vec3 world_to_camera(const Vec3& d, const Pose& pose) {
  const Basis b = basis_of(pose.yaw);
  return {b.right.x * d.x + b.right.y * d.y, -d.z, b.forward.x * d.x + b.forward.y * d.y};
}

Vec3 forward_of(const Pose& pose) { return basis_of(pose.yaw).forward; }

double yaw_of(const Vec3& d) {
  if (d.x == 0.0 && d.y == 0.0) {
    throw DegenerateDirectionError("vertical direction has no heading");
  }
  return normalize_angle(std::atan2(-d.y, d.x));
}

}  // namespace pixnav
