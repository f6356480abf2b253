#include "pixnav/raster_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <png.h>

namespace pixnav {

namespace {

static_assert(std::endian::native == std::endian::little, "raster IO assumes a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) {
      std::fclose(f);
    }
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_raster(const std::filesystem::path& path, const FloatRaster& raster) {
  const std::size_t expected = static_cast<std::size_t>(raster.width) * raster.height * raster.channels;
  if (raster.values.size() != expected) {
    throw DomainError("raster value count does not match its header");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(fmt::format("cannot open {} for writing", path.string()));
  }
  out.write(kRasterMagic.data(), kRasterMagic.size());
  put_u32(out, raster.width);
  put_u32(out, raster.height);
  put_u32(out, raster.channels);
  out.write(reinterpret_cast<const char*>(raster.values.data()),
            static_cast<std::streamsize>(raster.values.size() * sizeof(float)));
  if (!out) {
    throw IoError(fmt::format("write failed for {}", path.string()));
  }
}

FloatRaster read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open {}", path.string()));
  }
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kRasterMagic) {
    throw IoError(fmt::format("{} is not a float raster", path.string()));
  }
  FloatRaster r;
  r.width = get_u32(in);
  r.height = get_u32(in);
  r.channels = get_u32(in);
  if (!in || r.channels == 0 || r.channels > 4) {
    throw IoError(fmt::format("{}: bad raster header", path.string()));
  }
  r.values.resize(static_cast<std::size_t>(r.width) * r.height * r.channels);
  in.read(reinterpret_cast<char*>(r.values.data()), static_cast<std::streamsize>(r.values.size() * sizeof(float)));
  if (!in) {
    throw IoError(fmt::format("{}: truncated raster", path.string()));
  }
  return r;
}

FloatRaster depth_to_raster(const DepthImage& depth) {
  FloatRaster r{static_cast<std::uint32_t>(depth.width()), static_cast<std::uint32_t>(depth.height()), 1, {}};
  r.values.reserve(depth.size());
  for (double v : depth.data()) {
    r.values.push_back(static_cast<float>(v));
  }
  return r;
}

DepthImage raster_to_depth(const FloatRaster& raster) {
  if (raster.channels != 1) {
    throw DomainError("depth raster must have exactly one channel");
  }
  DepthImage d(static_cast<int>(raster.width), static_cast<int>(raster.height));
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<double>(raster.values[i]);
  }
  return d;
}

void write_png(const std::filesystem::path& path, const ColorImage& image) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) {
    throw IoError(fmt::format("cannot open {} for writing", path.string()));
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(fmt::format("PNG encoding failed for {}", path.string()));
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  static_assert(sizeof(Rgb) == 3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = const_cast<png_bytep>(reinterpret_cast<const png_byte*>(&image(0, y)));
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ColorImage read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) {
    throw IoError(fmt::format("cannot open {}", path.string()));
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialization failed");
  }
  ColorImage image;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(fmt::format("PNG decoding failed for {}", path.string()));
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(fmt::format("{}: expected 8-bit RGB", path.string()));
  }
  image = ColorImage(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
  for (int y = 0; y < image.height(); ++y) {
    png_read_row(png, reinterpret_cast<png_bytep>(&image(0, y)), nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

}  // namespace pixnav
