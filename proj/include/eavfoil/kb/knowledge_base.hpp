#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/kb/attribute.hpp"

namespace eavfoil {

class EntityId {
 public:
  EntityId() = default;
  explicit EntityId(std::string v) : value_(std::move(v)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const EntityId& id) { return os << id.value_; }

 private:
  std::string value_;
};

using AttributeMap = std::map<AttributeName, Assignment>;

struct Entity {
  EntityId id;
  AttributeMap assignments;

  const Assignment* find(AttributeName a) const {
    auto it = assignments.find(a);
    return it == assignments.end() ? nullptr : &it->second;
  }
  bool has(AttributeName a) const { return assignments.contains(a); }

  friend bool operator==(const Entity&, const Entity&) = default;
};

enum class RevisionOutcome { created, overwritten, rejected };

inline constexpr std::string_view to_string(RevisionOutcome o) {
  switch (o) {
    case RevisionOutcome::created: return "created";
    case RevisionOutcome::overwritten: return "overwritten";
    case RevisionOutcome::rejected: return "rejected";
  }
  return "?";
}

// Whether a write from `incoming` may replace an assignment held by `held`.
// dialog replaces anything; vision replaces vision and inferred; inferred
// only fills empty slots.
inline constexpr bool may_overwrite(Source incoming, Source held) {
  switch (incoming) {
    case Source::dialog: return true;
    case Source::vision: return held != Source::dialog;
    case Source::inferred: return false;
  }
  return false;
}

// Insertion-ordered EAV store. Not internally synchronized: callers that
// share one instance serialize writers themselves (see service::Session)
// and hand readers a copy.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  EntityId create_entity(const AttributeMap& initial = {}) {
    AttributeMap clean;
    for (const auto& [attr, assignment] : initial) clean.emplace(attr, checked(assignment));
    EntityId id("obj" + std::to_string(next_serial_++));
    index_.emplace(id.str(), entities_.size());
    entities_.push_back(Entity{id, std::move(clean)});
    ++revision_;
    return id;
  }

  RevisionOutcome revise_attribute(const EntityId& id, AttributeName attr, std::string value,
                                   Provenance prov) {
    Entity& e = mutable_entity(id);
    Assignment incoming = checked(Assignment{std::move(value), std::move(prov)});
    auto it = e.assignments.find(attr);
    if (it == e.assignments.end()) {
      e.assignments.emplace(attr, std::move(incoming));
      ++revision_;
      return RevisionOutcome::created;
    }
    if (!may_overwrite(incoming.provenance.source, it->second.provenance.source)) {
      return RevisionOutcome::rejected;
    }
    it->second = std::move(incoming);
    ++revision_;
    return RevisionOutcome::overwritten;
  }

  std::vector<EntityId> query_entities(AttributeName attr, std::string_view value) const {
    const std::string wanted = normalize_value(value);
    std::vector<EntityId> out;
    for (const Entity& e : entities_) {
      if (const Assignment* a = e.find(attr); a && a->value == wanted) out.push_back(e.id);
    }
    return out;
  }

  const Entity* find_entity(const EntityId& id) const {
    auto it = index_.find(id.str());
    return it == index_.end() ? nullptr : &entities_[it->second];
  }

  const Entity& get_entity(const EntityId& id) const {
    if (const Entity* e = find_entity(id)) return *e;
    throw NotFoundError("no such entity: " + id.str());
  }

  bool contains(const EntityId& id) const { return index_.contains(id.str()); }

  const std::vector<Entity>& entities() const noexcept { return entities_; }
  std::size_t size() const noexcept { return entities_.size(); }
  bool empty() const noexcept { return entities_.empty(); }
  std::uint64_t revision() const noexcept { return revision_; }

  // Rebuilds a KB from persisted parts. Throws InvalidArgument on a
  // duplicate id.
  static KnowledgeBase restore(std::uint64_t revision, std::vector<Entity> entities) {
    KnowledgeBase kb;
    kb.revision_ = revision;
    for (Entity& e : entities) {
      if (kb.index_.contains(e.id.str())) {
        throw InvalidArgument("duplicate entity id '" + e.id.str() + "'");
      }
      for (auto& [attr, assignment] : e.assignments) assignment = checked(std::move(assignment));
      kb.index_.emplace(e.id.str(), kb.entities_.size());
      kb.next_serial_ = std::max(kb.next_serial_, serial_after(e.id.str()));
      kb.entities_.push_back(std::move(e));
    }
    return kb;
  }

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
    return a.revision_ == b.revision_ && a.entities_ == b.entities_;
  }

 private:
  Entity& mutable_entity(const EntityId& id) {
    auto it = index_.find(id.str());
    if (it == index_.end()) throw NotFoundError("no such entity: " + id.str());
    return entities_[it->second];
  }

  static Assignment checked(Assignment a) {
    if (!(a.provenance.confidence >= 0.0 && a.provenance.confidence <= 1.0)) {
      throw InvalidArgument("confidence must lie in [0,1]");
    }
    a.value = normalize_value(a.value);
    if (a.value.empty()) throw InvalidArgument("attribute value must not be empty");
    return a;
  }

  // For ids of the form objN returns N+1, otherwise 1.
  static std::uint64_t serial_after(const std::string& id) {
    if (id.size() <= 3 || id.compare(0, 3, "obj") != 0) return 1;
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(id.data() + 3, id.data() + id.size(), n);
    if (ec != std::errc{} || ptr != id.data() + id.size()) return 1;
    return n + 1;
  }

  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t next_serial_ = 1;
  std::uint64_t revision_ = 0;
};

}  // namespace eavfoil

template <>
struct std::hash<eavfoil::EntityId> {
  std::size_t operator()(const eavfoil::EntityId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
