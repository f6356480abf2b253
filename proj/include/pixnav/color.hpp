#pragma once

#include <cstdint>

namespace pixnav {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  constexpr bool operator==(const Rgb&) const = default;
};

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

inline constexpr Rgb kPaintRed{255, 0, 0};
inline constexpr Rgb kBackground{0, 0, 0};

/// sRGB (D65) to CIE L*a*b*.
Lab srgb_to_lab(const Rgb& c);

/// CIE76 color difference: Euclidean distance in L*a*b*.
double delta_e76(const Lab& a, const Lab& b);
double delta_e76(const Rgb& a, const Rgb& b);

}  // namespace pixnav
