#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eavfoil/kb/knowledge_base.hpp"

namespace eavfoil::testing {

inline std::string data_path(const std::string& rel) { return std::string(EAVFOIL_DATA_DIR) + "/" + rel; }

// Seeded engine with the few draws the generators need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  bool chance(double p) { return unit() < p; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct RandomKbShape {
  std::size_t max_entities = 8;
  std::size_t max_attributes = 4;
  std::size_t max_values = 3;
  double fill = 0.8;  // chance an entity assigns a given attribute
};

struct RandomKb {
  KnowledgeBase kb;
  std::vector<AttributeName> attributes;
  Query query;
};

// Small dialog-sourced KB over a random attribute subset with values
// "<attr>_v<k>", plus a query whose attribute some entity assigns.
inline RandomKb random_kb(Rng& rng, const RandomKbShape& shape = {}) {
  while (true) {
    RandomKb out;
    std::vector<AttributeName> pool(kAllAttributes.begin(), kAllAttributes.end());
    const std::size_t n_attr = rng.between(1, shape.max_attributes);
    for (std::size_t i = 0; i < n_attr; ++i) {
      std::size_t k = rng.below(pool.size());
      out.attributes.push_back(pool[k]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
    }
    const std::size_t n_values = rng.between(1, shape.max_values);
    const std::size_t n_entities = rng.between(1, shape.max_entities);
    for (std::size_t e = 0; e < n_entities; ++e) {
      AttributeMap attrs;
      for (AttributeName a : out.attributes) {
        if (!rng.chance(shape.fill)) continue;
        std::string v = std::string(to_string(a)) + "_v" + std::to_string(rng.below(n_values));
        attrs.emplace(a, Assignment{v, Provenance::dialog()});
      }
      out.kb.create_entity(attrs);
    }
    std::vector<Query> queries;
    for (const Entity& e : out.kb.entities()) {
      for (const auto& [a, asg] : e.assignments) queries.push_back({a, asg.value});
    }
    if (queries.empty()) continue;
    out.query = rng.pick(queries);
    return out;
  }
}

}  // namespace eavfoil::testing
