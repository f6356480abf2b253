#include "pixnav/gradmap.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace pixnav {

namespace {

constexpr int kSobelX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
constexpr int kSobelY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};

}  // namespace

GradientMap sobel(const DepthImage& depth) {
  const int w = depth.width();
  const int h = depth.height();
  if (w < 3 || h < 3) {
    throw DomainError(fmt::format("sobel needs at least 3x3 pixels, got {}x{}", w, h));
  }
  GradientMap out{Image<double>(w, h), Image<double>(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sx = 0.0;
      double sy = 0.0;
      for (int ky = 0; ky < 3; ++ky) {
        const int sy_row = std::clamp(y + ky - 1, 0, h - 1);
        for (int kx = 0; kx < 3; ++kx) {
          const double v = depth(std::clamp(x + kx - 1, 0, w - 1), sy_row);
          sx += kSobelX[ky][kx] * v;
          sy += kSobelY[ky][kx] * v;
        }
      }
      out.gx(x, y) = sx;
      out.gy(x, y) = sy;
    }
  }
  return out;
}

FloatRaster gradmap_to_raster(const GradientMap& grad) {
  FloatRaster r{static_cast<std::uint32_t>(grad.width()), static_cast<std::uint32_t>(grad.height()), 2, {}};
  r.values.reserve(2 * grad.gx.size());
  for (double v : grad.gx.data()) {
    r.values.push_back(static_cast<float>(v));
  }
  for (double v : grad.gy.data()) {
    r.values.push_back(static_cast<float>(v));
  }
  return r;
}

}  // namespace pixnav
