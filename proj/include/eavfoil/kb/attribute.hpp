#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "eavfoil/error.hpp"

namespace eavfoil {

// Declaration order is the canonical (alphabetical) order used for
// FactBase columns. Do not reorder.
enum class AttributeName {
  category,
  color,
  functionality,
  label,
  location,
  owner,
  restriction,
  size,
  weight,
};

inline constexpr std::array<AttributeName, 9> kAllAttributes = {
    AttributeName::category,    AttributeName::color, AttributeName::functionality,
    AttributeName::label,       AttributeName::location, AttributeName::owner,
    AttributeName::restriction, AttributeName::size,  AttributeName::weight,
};

inline constexpr std::string_view to_string(AttributeName a) {
  switch (a) {
    case AttributeName::category: return "category";
    case AttributeName::color: return "color";
    case AttributeName::functionality: return "functionality";
    case AttributeName::label: return "label";
    case AttributeName::location: return "location";
    case AttributeName::owner: return "owner";
    case AttributeName::restriction: return "restriction";
    case AttributeName::size: return "size";
    case AttributeName::weight: return "weight";
  }
  return "?";
}

// Attributes that can only come from perception.
inline constexpr bool is_visual(AttributeName a) {
  return a == AttributeName::category || a == AttributeName::color;
}

// Accepts canonical names plus the aliases "position" and "ownership".
inline std::optional<AttributeName> parse_attribute(std::string_view name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "position") return AttributeName::location;
  if (lower == "ownership") return AttributeName::owner;
  for (AttributeName a : kAllAttributes) {
    if (to_string(a) == lower) return a;
  }
  return std::nullopt;
}

inline AttributeName require_attribute(std::string_view name) {
  if (auto a = parse_attribute(name)) return *a;
  throw InvalidArgument("unknown attribute '" + std::string(name) + "'");
}

// Lowercase, trim, and join internal whitespace runs with '_'.
// normalize_value(normalize_value(v)) == normalize_value(v).
inline std::string normalize_value(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_sep = false;
  for (char c : raw) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) {
      out.push_back('_');
      pending_sep = false;
    }
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

enum class Source { inferred, vision, dialog };

inline constexpr std::string_view to_string(Source s) {
  switch (s) {
    case Source::inferred: return "inferred";
    case Source::vision: return "vision";
    case Source::dialog: return "dialog";
  }
  return "?";
}

inline std::optional<Source> parse_source(std::string_view s) {
  if (s == "vision") return Source::vision;
  if (s == "dialog") return Source::dialog;
  if (s == "inferred") return Source::inferred;
  return std::nullopt;
}

struct Provenance {
  Source source = Source::dialog;
  double confidence = 1.0;
  // Rendered clause that produced an inferred assignment; empty otherwise.
  std::string rule;

  static Provenance dialog() { return {Source::dialog, 1.0, {}}; }
  static Provenance vision(double confidence) { return {Source::vision, confidence, {}}; }
  static Provenance inferred(double confidence, std::string rule) {
    return {Source::inferred, confidence, std::move(rule)};
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Assignment {
  std::string value;
  Provenance provenance;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// An (attribute, value) pair asked about: a rule target or a KB filter.
struct Query {
  AttributeName attribute = AttributeName::category;
  std::string value;

  friend auto operator<=>(const Query&, const Query&) = default;
};

inline std::string to_string(const Query& q) {
  return std::string(to_string(q.attribute)) + "=" + q.value;
}

}  // namespace eavfoil
