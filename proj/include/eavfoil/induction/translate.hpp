#pragma once

#include <map>
#include <set>
#include <string>

#include "eavfoil/error.hpp"
#include "eavfoil/induction/factbase.hpp"
#include "eavfoil/kb/knowledge_base.hpp"

namespace eavfoil::induction {

struct TranslateOptions {
  // Treat inferred assignments as observed.
  bool include_inferred = false;
  // Positive weight of a vision-sourced query assignment becomes its
  // confidence instead of 1.0.
  bool probabilistic = false;
  // Entities left out of the example set.
  std::set<EntityId> exclude;
};

// Encodes the KB as a learning problem for `query`. Entities holding the
// query value are positives (weight 1), entities holding another value of
// the query attribute are negatives (weight 0), all others are left out.
inline FactBase translate(const KnowledgeBase& kb, const Query& query, const TranslateOptions& opts = {}) {
  auto visible = [&](const Assignment* a) {
    return a != nullptr && (opts.include_inferred || a->provenance.source != Source::inferred);
  };
  const std::string target_value = normalize_value(query.value);

  std::vector<const Entity*> members;
  for (const Entity& e : kb.entities()) {
    if (opts.exclude.contains(e.id)) continue;
    if (visible(e.find(query.attribute))) members.push_back(&e);
  }
  if (members.empty()) throw Error("empty example set");

  FactBase fb;
  fb.target = target_value;
  for (AttributeName a : kAllAttributes) {
    if (a == query.attribute) continue;
    for (const Entity* e : members) {
      if (visible(e->find(a))) {
        fb.columns.push_back(a);
        break;
      }
    }
  }

  std::map<std::pair<AttributeName, std::string>, std::size_t> interned;
  std::map<AttributeName, std::size_t> counters;
  std::size_t anon = 0;
  for (const Entity* e : members) {
    const Assignment& q = *e->find(query.attribute);
    Example ex;
    if (q.value != target_value) {
      ex.weight = 0.0;
    } else if (opts.probabilistic && q.provenance.source == Source::vision) {
      ex.weight = q.provenance.confidence;
    } else {
      ex.weight = 1.0;
    }
    for (AttributeName col : fb.columns) {
      const Assignment* a = e->find(col);
      if (!visible(a)) {
        fb.symbols.push_back({std::string(kAnonymousPrefix) + std::to_string(++anon), col, std::nullopt});
        ex.tuple.push_back(fb.symbols.size() - 1);
        continue;
      }
      auto key = std::make_pair(col, a->value);
      auto it = interned.find(key);
      if (it == interned.end()) {
        fb.symbols.push_back({symbol_prefix(col) + std::to_string(++counters[col]), col, a->value});
        it = interned.emplace(key, fb.symbols.size() - 1).first;
        fb.value_facts[a->value].insert(it->second);
      }
      ex.tuple.push_back(it->second);
    }
    fb.examples.push_back(std::move(ex));
  }
  return fb;
}

}  // namespace eavfoil::induction
