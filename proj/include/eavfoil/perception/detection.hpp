#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "eavfoil/error.hpp"

namespace eavfoil::perception {

struct BoundingBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  bool valid() const {
    return x_min >= 0 && y_min >= 0 && x_min < x_max && y_min < y_max;
  }
  double area() const { return (x_max - x_min) * (y_max - y_min); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Intersection over union; 0 for disjoint boxes.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0.0;
  const double inter = w * h;
  return inter / (a.area() + b.area() - inter);
}

struct Hsv {
  double h = 0;  // degrees, [0,360)
  double s = 0;  // [0,1]
  double v = 0;  // [0,1]

  bool valid() const { return h >= 0 && h < 360 && s >= 0 && s <= 1 && v >= 0 && v <= 1; }

  friend bool operator==(const Hsv&, const Hsv&) = default;
};

struct CategoryCandidate {
  std::string category;
  double confidence = 0;

  friend bool operator==(const CategoryCandidate&, const CategoryCandidate&) = default;
};

// Descending confidence, ties by category name.
inline void sort_candidates(std::vector<CategoryCandidate>& cs) {
  std::sort(cs.begin(), cs.end(), [](const CategoryCandidate& a, const CategoryCandidate& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.category < b.category;
  });
}

struct Detection {
  BoundingBox box;
  std::vector<CategoryCandidate> candidates;  // non-empty, sorted
  Hsv region_color;

  const CategoryCandidate& top() const { return candidates.front(); }

  friend bool operator==(const Detection&, const Detection&) = default;
};

inline void validate(const Detection& d) {
  if (!d.box.valid()) throw InvalidArgument("invalid bounding box");
  if (d.candidates.empty()) throw InvalidArgument("detection without candidates");
  for (std::size_t i = 0; i < d.candidates.size(); ++i) {
    const double c = d.candidates[i].confidence;
    if (!(c >= 0 && c <= 1)) throw InvalidArgument("candidate confidence outside [0,1]");
    if (i > 0 && d.candidates[i - 1].confidence < c) throw InvalidArgument("candidates not sorted");
  }
  if (!d.region_color.valid()) throw InvalidArgument("invalid HSV color");
}

struct SceneFrame {
  std::string image_id;
  std::vector<Detection> detections;
};

}  // namespace eavfoil::perception
