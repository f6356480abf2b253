#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pixnav/image.hpp"

namespace pixnav {

// Float raster file: 8-byte magic "PXNRAST1", then little-endian uint32
// width, height, channels, then channels * width * height little-endian
// float32 values, channel-planar, each plane row-major.
inline constexpr std::array<char, 8> kRasterMagic{'P', 'X', 'N', 'R', 'A', 'S', 'T', '1'};

struct FloatRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 0;
  std::vector<float> values;  // channel-planar

  std::span<const float> plane(std::uint32_t c) const {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    return std::span<const float>(values).subspan(c * n, n);
  }

  bool operator==(const FloatRaster&) const = default;
};

void write_raster(const std::filesystem::path& path, const FloatRaster& raster);
FloatRaster read_raster(const std::filesystem::path& path);

FloatRaster depth_to_raster(const DepthImage& depth);
/// Depth as stored on disk: float32 values widened back to double.
DepthImage raster_to_depth(const FloatRaster& raster);

void write_png(const std::filesystem::path& path, const ColorImage& image);
ColorImage read_png(const std::filesystem::path& path);

}  // namespace pixnav
