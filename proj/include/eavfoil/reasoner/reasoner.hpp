#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/induction/clause.hpp"
#include "eavfoil/kb/knowledge_base.hpp"
#include "eavfoil/perception/detection.hpp"

namespace eavfoil::reasoner {

using induction::Clause;
using induction::RuleSet;

struct InferenceRecord {
  EntityId entity;
  AttributeName attribute = AttributeName::category;
  std::string value;
  Clause rule;
  std::string rule_text;
  std::uint64_t fired_at_revision = 0;  // KB revision the body was checked against
};

// Body check against an entity's current assignments. Each literal needs
// the column attribute assigned with exactly the predicate's value, so
// unassigned columns only pass the empty body.
inline bool body_holds(const Clause& clause, const std::vector<AttributeName>& columns, const Entity& e) {
  for (const auto& lit : clause.body) {
    const Assignment* a = e.find(columns.at(lit.column));
    if (!a || a->value != lit.predicate) return false;
  }
  return true;
}

// First clause of `rules` whose body the entity satisfies.
inline const Clause* firing_clause(const RuleSet& rules, const Entity& e, std::size_t* index = nullptr) {
  for (std::size_t i = 0; i < rules.clauses.size(); ++i) {
    if (body_holds(rules.clauses[i], rules.columns, e)) {
      if (index) *index = i;
      return &rules.clauses[i];
    }
  }
  return nullptr;
}

// One forward-chaining step: every entity lacking the query attribute whose
// assignments satisfy some clause gains the query value as an inferred
// assignment. Running it again adds nothing.
inline std::vector<InferenceRecord> apply_rules(KnowledgeBase& kb, const RuleSet& rules, const Query& query) {
  std::vector<InferenceRecord> records;
  std::vector<EntityId> ids;
  for (const Entity& e : kb.entities()) ids.push_back(e.id);
  const std::string value = normalize_value(query.value);
  for (const EntityId& id : ids) {
    const Entity& e = kb.get_entity(id);
    if (e.has(query.attribute)) continue;
    std::size_t index = 0;
    const Clause* clause = firing_clause(rules, e, &index);
    if (!clause) continue;
    const std::uint64_t revision = kb.revision();
    const std::string text = induction::render_clause(*clause);
    double confidence = index < rules.stats.size() ? rules.stats[index].m_estimate : 1.0;
    confidence = std::clamp(confidence, 0.0, 1.0);
    if (kb.revise_attribute(id, query.attribute, value, Provenance::inferred(confidence, text)) ==
        RevisionOutcome::rejected) {
      continue;
    }
    records.push_back({id, query.attribute, value, *clause, text, revision});
  }
  return records;
}

struct QueryAnswer {
  std::vector<EntityId> direct;
  std::vector<EntityId> inferred;
};

// Read-only: who holds the value now, and who would gain it from the rules.
inline QueryAnswer answer_query(const KnowledgeBase& kb, const RuleSet& rules, const Query& query) {
  QueryAnswer out;
  out.direct = kb.query_entities(query.attribute, query.value);
  for (const Entity& e : kb.entities()) {
    if (!e.has(query.attribute) && firing_clause(rules, e)) out.inferred.push_back(e.id);
  }
  return out;
}

struct DisambiguationParams {
  double tau = 0.5;  // confidence-ratio floor in (0,1]
};

// Rule support for a category: a non-empty clause of the category's rule
// set holding on the entity's non-category assignments.
inline bool rule_supported(const RuleSet& rules, const Entity& e) {
  Entity view = e;
  view.assignments.erase(AttributeName::category);
  for (const Clause& c : rules.clauses) {
    if (!c.body.empty() && body_holds(c, rules.columns, view)) return true;
  }
  return false;
}

// Chooses among detection candidates (sorted, descending) for the entity:
// the most confident rule-supported candidate within tau of the top
// confidence, otherwise the top candidate. The choice is written back as a
// vision assignment.
inline std::string disambiguate_category(KnowledgeBase& kb, const EntityId& id,
                                         const std::vector<perception::CategoryCandidate>& candidates,
                                         const std::map<std::string, RuleSet>& rules,
                                         const DisambiguationParams& params = {}) {
  if (candidates.empty()) throw InvalidArgument("no category candidates");
  if (!(params.tau > 0 && params.tau <= 1)) throw InvalidArgument("tau must lie in (0,1]");
  const Entity& e = kb.get_entity(id);
  const double floor = params.tau * candidates.front().confidence;
  const perception::CategoryCandidate* chosen = &candidates.front();
  for (const auto& c : candidates) {
    if (c.confidence < floor) continue;
    auto it = rules.find(c.category);
    if (it != rules.end() && rule_supported(it->second, e)) {
      chosen = &c;
      break;
    }
  }
  kb.revise_attribute(id, AttributeName::category, chosen->category, Provenance::vision(chosen->confidence));
  return chosen->category;
}

// `rev=N entity=objK attr=V value=W rule="<clause>"`
inline std::string format_log_line(const InferenceRecord& r) {
  return "rev=" + std::to_string(r.fired_at_revision) + " entity=" + r.entity.str() +
         " attr=" + std::string(to_string(r.attribute)) + " value=" + r.value + " rule=\"" + r.rule_text + "\"";
}

inline void append_log(const std::string& path, const std::vector<InferenceRecord>& records) {
  if (records.empty()) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot append to '" + path + "'");
  for (const auto& r : records) out << format_log_line(r) << '\n';
}

}  // namespace eavfoil::reasoner
