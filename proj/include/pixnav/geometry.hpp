#pragma once

#include <cmath>
#include <numbers>

#include "pixnav/errors.hpp"

namespace pixnav {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
Vec3 normalized(const Vec3& v);

/// Continuous image coordinate. Integer values are pixel centers.
struct PixelCoord {
  double x = 0.0;
  double y = 0.0;

  constexpr bool operator==(const PixelCoord&) const = default;
};

inline double pixel_distance(const PixelCoord& a, const PixelCoord& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Pinhole camera. Principal point sits at ((width-1)/2, (height-1)/2) so the
/// center of an odd-sized grid lies exactly on the optical axis.
class CameraIntrinsics {
 public:
  CameraIntrinsics(int width, int height, double hfov, double vfov);

  /// Square image with equal horizontal and vertical field of view, in degrees.
  static CameraIntrinsics square(int size, double fov_degrees);

  int width() const { return width_; }
  int height() const { return height_; }
  double hfov() const { return hfov_; }
  double vfov() const { return vfov_; }
  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return (width_ - 1) / 2.0; }
  double cy() const { return (height_ - 1) / 2.0; }
  int pixel_count() const { return width_ * height_; }
  double diagonal() const { return std::hypot(width_, height_); }

  /// Pixel centers: 0 <= x <= width-1.
  bool contains(const PixelCoord& p) const;
  /// Sensor extent covered by the pixel footprints: -0.5 <= x <= width-0.5.
  bool within_sensor(const PixelCoord& p) const;

  bool operator==(const CameraIntrinsics&) const = default;

 private:
  int width_;
  int height_;
  double hfov_;
  double vfov_;
  double fx_;
  double fy_;
};

/// Position plus heading. Pitch and roll are always zero.
struct Pose {
  Vec3 position;
  double yaw = 0.0;  // radians, (-pi, pi], positive turns right (clockwise seen from above)

  bool operator==(const Pose&) const = default;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

Pose make_pose(const Vec3& position, double yaw);

// Camera frame: x right, y down, z forward. World frame: z up; at yaw 0 the
// camera looks along world +x and its right-hand side is world -y.

/// Unit ray through a pixel, in camera coordinates. Throws DomainError when
/// the pixel lies outside the sensor extent.
Vec3 back_project(const PixelCoord& p, const CameraIntrinsics& k);

/// Image coordinate of a camera-frame direction. The result may fall outside
/// the image; callers check. Throws BehindCameraError when d.z <= 0.
PixelCoord project(const Vec3& d, const CameraIntrinsics& k);

/// Rotates a camera-frame vector into world orientation for the given pose
/// (no translation).
Vec3 camera_to_world(const Vec3& d, const Pose& pose);
Vec3 world_to_camera(const Vec3& d, const Pose& pose);

/// World heading of the pose's optical axis.
Vec3 forward_of(const Pose& pose);

/// Heading of the horizontal projection of a world direction, measured from
/// world +x, positive clockwise seen from above. Throws DegenerateDirectionError
/// for vertical vectors.
double yaw_of(const Vec3& d);

}  // namespace pixnav
