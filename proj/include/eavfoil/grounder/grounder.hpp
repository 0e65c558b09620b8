#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "eavfoil/grounder/embedding.hpp"
#include "eavfoil/kb/knowledge_base.hpp"
#include "eavfoil/nlu/nlu.hpp"

namespace eavfoil::grounder {

struct GroundingResult {
  EntityId entity;
  double score = 0;
  std::vector<std::pair<EntityId, double>> ranking;  // ascending score
};

// Mean over dialogue symbols of the best-matching attribute value distance.
inline double grounding_score(const std::vector<std::string>& symbols, const Entity& e,
                              const EmbeddingTable& table) {
  double total = 0;
  for (const std::string& s : symbols) {
    double best = 2.0;
    for (const auto& [attr, a] : e.assignments) best = std::min(best, token_distance(s, a.value, table));
    total += best;
  }
  return total / static_cast<double>(symbols.size());
}

// Picks the entity most compatible with the expression. Entities whose
// assigned location differs from the expression's location are skipped;
// ties go to the earlier entity.
inline GroundingResult ground(const nlu::ReferentialExpression& ref, const KnowledgeBase& kb,
                              const EmbeddingTable& table) {
  if (kb.empty()) throw Error("nothing to ground against");
  if (ref.symbols.empty()) throw InvalidArgument("referential expression without symbols");
  GroundingResult result;
  for (const Entity& e : kb.entities()) {
    if (ref.location) {
      if (const Assignment* loc = e.find(AttributeName::location); loc && loc->value != *ref.location) {
        continue;
      }
    }
    result.ranking.emplace_back(e.id, grounding_score(ref.symbols, e, table));
  }
  if (result.ranking.empty()) throw Error("no entity is " + ref.location.value_or("there"));
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  result.entity = result.ranking.front().first;
  result.score = result.ranking.front().second;
  return result;
}

}  // namespace eavfoil::grounder
