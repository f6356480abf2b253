#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pixnav/errors.hpp"
#include "pixnav/raster_io.hpp"

using namespace pixnav;
namespace fs = std::filesystem;

TEST_CASE("float raster round trip and header") {
  const fs::path dir = fs::temp_directory_path() / "pixnav_raster_test";
  fs::create_directories(dir);
  DepthImage d(3, 2);
  for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] = 0.5 + i;
  write_raster(dir / "d.f32", depth_to_raster(d));
  const FloatRaster back = read_raster(dir / "d.f32");
  CHECK(back == depth_to_raster(d));
  CHECK(raster_to_depth(back).data() == d.data());

  std::ifstream in(dir / "d.f32", std::ios::binary);
  char head[20];
  in.read(head, 20);
  CHECK(std::string(head, 8) == "PXNRAST1");
  CHECK(head[8] == 3);   // width, little endian
  CHECK(head[12] == 2);  // height
  CHECK(head[16] == 1);  // channels
  CHECK(fs::file_size(dir / "d.f32") == 20u + 6u * 4u);

  std::ofstream(dir / "bad.f32", std::ios::binary) << "NOTARASTER";
  CHECK_THROWS_AS(read_raster(dir / "bad.f32"), IoError);
  CHECK_THROWS_AS(read_raster(dir / "missing.f32"), IoError);
}

TEST_CASE("png round trip") {
  const fs::path dir = fs::temp_directory_path() / "pixnav_raster_test";
  fs::create_directories(dir);
  ColorImage img(5, 4, Rgb{10, 20, 30});
  img(2, 3) = {255, 0, 0};
  write_png(dir / "c.png", img);
  const ColorImage back = read_png(dir / "c.png");
  CHECK(back.width() == 5);
  CHECK(back.data() == img.data());
}
