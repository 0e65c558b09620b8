#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/perception/detection.hpp"

namespace eavfoil::perception {

inline constexpr double kDefaultIouThreshold = 0.5;

inline void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("IoU threshold must lie in (0,1]");
  }
}

namespace detail {

inline void merge_candidates(std::vector<CategoryCandidate>& into,
                             const std::vector<CategoryCandidate>& from) {
  for (const auto& c : from) {
    auto it = std::find_if(into.begin(), into.end(),
                           [&](const CategoryCandidate& x) { return x.category == c.category; });
    if (it == into.end()) {
      into.push_back(c);
    } else {
      it->confidence = std::max(it->confidence, c.confidence);
    }
  }
  sort_candidates(into);
}

}  // namespace detail

// Greedy region merge. Detections are visited by descending top confidence;
// one overlapping an already kept detection (IoU >= threshold) folds its
// candidates into the first such keeper. Keepers come back in input order.
inline std::vector<Detection> dedup_detections(const std::vector<Detection>& dets,
                                               double threshold = kDefaultIouThreshold) {
  check_threshold(threshold);
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].top().confidence > dets[b].top().confidence;
  });

  std::vector<std::size_t> keepers;  // visit order
  std::vector<Detection> merged(dets.size());
  for (std::size_t i : order) {
    auto hit = std::find_if(keepers.begin(), keepers.end(), [&](std::size_t k) {
      return iou(dets[i].box, dets[k].box) >= threshold;
    });
    if (hit == keepers.end()) {
      keepers.push_back(i);
      merged[i] = dets[i];
      detail::merge_candidates(merged[i].candidates, {});
    } else {
      detail::merge_candidates(merged[*hit].candidates, dets[i].candidates);
    }
  }
  std::sort(keepers.begin(), keepers.end());
  std::vector<Detection> out;
  out.reserve(keepers.size());
  for (std::size_t k : keepers) out.push_back(std::move(merged[k]));
  return out;
}

}  // namespace eavfoil::perception
