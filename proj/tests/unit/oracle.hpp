#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eavfoil/induction/clause.hpp"
#include "eavfoil/kb/knowledge_base.hpp"

// Reference learner for small KBs. It works on KB assignments directly and
// shares no code with translate() or induce().
namespace eavfoil::oracle {

using Literal = std::pair<AttributeName, std::string>;

inline bool holds(const Entity& e, const std::vector<Literal>& body) {
  for (const auto& [attr, value] : body) {
    auto it = e.assignments.find(attr);
    if (it == e.assignments.end() || it->second.value != value) return false;
  }
  return true;
}

struct Labeled {
  const Entity* entity;
  bool positive;
};

// Entities carrying the query attribute, labeled by whether they hold the
// query value.
inline std::vector<Labeled> examples(const KnowledgeBase& kb, const Query& q) {
  std::vector<Labeled> out;
  for (const Entity& e : kb.entities()) {
    auto it = e.assignments.find(q.attribute);
    if (it != e.assignments.end()) out.push_back({&e, it->second.value == q.value});
  }
  return out;
}

// Every clause with at most `max_body` distinct literals over the values
// the examples carry, searched for one that covers every positive and no
// negative. Returns the first found in enumeration order.
inline std::optional<std::vector<Literal>> consistent_full_cover(const KnowledgeBase& kb, const Query& q,
                                                                 std::size_t max_body = 3) {
  const auto ex = examples(kb, q);
  std::set<Literal> universe_set;
  for (const auto& l : ex) {
    for (const auto& [attr, a] : l.entity->assignments) {
      if (attr != q.attribute) universe_set.insert({attr, a.value});
    }
  }
  const std::vector<Literal> universe(universe_set.begin(), universe_set.end());
  auto good = [&](const std::vector<Literal>& body) {
    for (const auto& l : ex) {
      if (holds(*l.entity, body) != l.positive) return false;
    }
    return true;
  };
  std::vector<Literal> body;
  std::optional<std::vector<Literal>> found;
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (found) return;
    if (good(body)) {
      found = body;
      return;
    }
    if (body.size() == max_body) return;
    for (std::size_t i = start; i < universe.size() && !found; ++i) {
      body.push_back(universe[i]);
      self(self, i + 1);
      body.pop_back();
    }
  };
  visit(visit, 0);
  return found;
}

struct Coverage {
  std::size_t positives_covered = 0;
  std::size_t positives = 0;
  std::size_t negatives_covered = 0;
};

// Coverage of a learned rule set, evaluated by reading each literal as
// "column attribute = predicate" on the entity.
inline Coverage coverage(const KnowledgeBase& kb, const Query& q, const induction::RuleSet& rules) {
  Coverage c;
  for (const auto& l : examples(kb, q)) {
    bool covered = false;
    for (const auto& clause : rules.clauses) {
      std::vector<Literal> body;
      for (const auto& lit : clause.body) body.push_back({rules.columns.at(lit.column), lit.predicate});
      covered = covered || holds(*l.entity, body);
    }
    if (l.positive) {
      ++c.positives;
      c.positives_covered += covered;
    } else {
      c.negatives_covered += covered;
    }
  }
  return c;
}

}  // namespace eavfoil::oracle
