#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eavfoil/kb/knowledge_base.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/perception/color.hpp"
#include "eavfoil/perception/dedup.hpp"

namespace eavfoil::perception {

inline SceneFrame scene_from_json(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw ParseError("scene document must be an object");
  SceneFrame frame;
  if (doc.contains("image_id")) {
    if (!doc["image_id"].is_string()) throw ParseError("'image_id' must be a string");
    frame.image_id = doc["image_id"].get<std::string>();
  }
  if (!doc.contains("detections") || !doc["detections"].is_array()) {
    throw ParseError("'detections' must be an array");
  }
  std::size_t index = 0;
  for (const json& d : doc["detections"]) {
    const std::string where = "detections[" + std::to_string(index++) + "]";
    auto numbers = [&](const char* key, std::size_t n) {
      if (!d.is_object() || !d.contains(key) || !d[key].is_array() || d[key].size() != n) {
        throw ParseError(where + ": '" + key + "' must be an array of " + std::to_string(n) + " numbers");
      }
      std::vector<double> out;
      for (const json& x : d[key]) {
        if (!x.is_number()) throw ParseError(where + ": '" + key + "' must hold numbers");
        out.push_back(x.get<double>());
      }
      return out;
    };
    Detection det;
    auto box = numbers("box", 4);
    det.box = {box[0], box[1], box[2], box[3]};
    auto hsv = numbers("hsv", 3);
    det.region_color = {hsv[0], hsv[1], hsv[2]};
    if (!d.contains("candidates") || !d["candidates"].is_array()) {
      throw ParseError(where + ": 'candidates' must be an array");
    }
    for (const json& c : d["candidates"]) {
      if (!c.is_object() || !c.contains("cat") || !c["cat"].is_string() || !c.contains("conf") ||
          !c["conf"].is_number()) {
        throw ParseError(where + ": candidate needs string 'cat' and number 'conf'");
      }
      det.candidates.push_back({normalize_value(c["cat"].get<std::string>()), c["conf"].get<double>()});
    }
    sort_candidates(det.candidates);
    try {
      validate(det);
    } catch (const InvalidArgument& e) {
      throw ParseError(where + ": " + e.what());
    }
    frame.detections.push_back(std::move(det));
  }
  return frame;
}

inline SceneFrame load_scene(std::string_view text) {
  return scene_from_json(eavfoil::detail::parse_json_text(text));
}

inline SceneFrame load_scene_file(const std::string& path) {
  return load_scene(eavfoil::detail::read_file(path));
}

struct IngestedDetection {
  EntityId entity;
  Detection detection;  // post-merge, full candidate list
};

// Deduplicates the frame and creates one entity per surviving detection
// carrying vision-sourced category and color.
inline std::vector<IngestedDetection> ingest_scene(const SceneFrame& frame, KnowledgeBase& kb,
                                                   double threshold = kDefaultIouThreshold) {
  check_threshold(threshold);
  std::vector<IngestedDetection> out;
  for (Detection& det : dedup_detections(frame.detections, threshold)) {
    AttributeMap attrs;
    attrs.emplace(AttributeName::category,
                  Assignment{det.top().category, Provenance::vision(det.top().confidence)});
    attrs.emplace(AttributeName::color,
                  Assignment{std::string(name_color(det.region_color)), Provenance::vision(1.0)});
    EntityId id = kb.create_entity(attrs);
    out.push_back({std::move(id), std::move(det)});
  }
  return out;
}

}  // namespace eavfoil::perception
