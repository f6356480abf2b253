#pragma once

#include "pixnav/image.hpp"
#include "pixnav/raster_io.hpp"

namespace pixnav {

/// Per-pixel depth derivatives along image x and y.
struct GradientMap {
  Image<double> gx;
  Image<double> gy;

  int width() const { return gx.width(); }
  int height() const { return gx.height(); }
};

/// 3x3 Sobel-Feldman response (correlation, so a rising ramp along x gives a
/// positive gx) with edge-replicated borders and no normalization.
GradientMap sobel(const DepthImage& depth);

/// Two-channel float raster: gx plane then gy plane.
FloatRaster gradmap_to_raster(const GradientMap& grad);

}  // namespace pixnav
