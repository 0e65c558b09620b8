#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "eavfoil/perception/detection.hpp"

namespace eavfoil::perception {

struct PaletteEntry {
  std::string_view name;
  Hsv hsv;
};

inline constexpr std::array<PaletteEntry, 12> kPalette = {{
    {"red", {0, 1, 1}},
    {"orange", {30, 1, 1}},
    {"yellow", {60, 1, 1}},
    {"green", {120, 1, 1}},
    {"cyan", {180, 1, 1}},
    {"blue", {240, 1, 1}},
    {"purple", {275, 1, 1}},
    {"pink", {330, 0.5, 1}},
    {"brown", {30, 1, 0.6}},
    {"white", {0, 0, 1}},
    {"gray", {0, 0, 0.5}},
    {"black", {0, 0, 0}},
}};

inline double circular_hue_difference(double h1, double h2) {
  const double d = std::fabs(h1 - h2);
  return std::min(d, 360.0 - d);
}

// sqrt((dh/180)^2 + ds^2 + dv^2) with circular hue difference in degrees.
inline double hsv_distance(const Hsv& a, const Hsv& b) {
  const double dh = circular_hue_difference(a.h, b.h) / 180.0;
  const double ds = a.s - b.s;
  const double dv = a.v - b.v;
  return std::sqrt(dh * dh + ds * ds + dv * dv);
}

inline constexpr double kBlackValueCutoff = 0.15;
inline constexpr double kAchromaticSaturation = 0.12;

// Nearest palette color name. Very dark regions are black and
// low-saturation regions map to white/gray/black by value thirds before the
// distance search; ties resolve to the earlier palette entry.
inline std::string_view name_color(const Hsv& hsv) {
  if (hsv.v < kBlackValueCutoff) return "black";
  if (hsv.s < kAchromaticSaturation) {
    if (hsv.v >= 2.0 / 3.0) return "white";
    if (hsv.v >= 1.0 / 3.0) return "gray";
    return "black";
  }
  std::string_view best = kPalette.front().name;
  double best_d = hsv_distance(hsv, kPalette.front().hsv);
  for (const auto& entry : kPalette) {
    const double d = hsv_distance(hsv, entry.hsv);
    if (d < best_d) {
      best_d = d;
      best = entry.name;
    }
  }
  return best;
}

}  // namespace eavfoil::perception
