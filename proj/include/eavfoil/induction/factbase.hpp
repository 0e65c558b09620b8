#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eavfoil/kb/attribute.hpp"

namespace eavfoil::induction {

// Opaque constant standing for one (attribute, value) pair. Anonymous
// symbols fill unassigned cells and belong to no value predicate.
struct ValueSymbol {
  std::string id;
  AttributeName attribute = AttributeName::category;
  std::optional<std::string> value;

  bool anonymous() const { return !value.has_value(); }
  friend bool operator==(const ValueSymbol&, const ValueSymbol&) = default;
};

struct Example {
  std::vector<std::size_t> tuple;  // symbol index per column
  double weight = 1.0;             // probability of the target, in [0,1]

  friend bool operator==(const Example&, const Example&) = default;
};

// Learning problem for one target: value predicates over symbols plus
// weighted target examples.
struct FactBase {
  std::string target;
  std::vector<AttributeName> columns;
  std::vector<ValueSymbol> symbols;
  std::map<std::string, std::set<std::size_t>> value_facts;
  std::vector<Example> examples;

  std::size_t arity() const { return columns.size(); }

  const ValueSymbol& symbol_at(const Example& e, std::size_t column) const {
    return symbols[e.tuple[column]];
  }

  bool holds(const std::string& predicate, std::size_t symbol) const {
    auto it = value_facts.find(predicate);
    return it != value_facts.end() && it->second.contains(symbol);
  }

  double positive_mass() const {
    double s = 0;
    for (const auto& e : examples) s += e.weight;
    return s;
  }

  friend bool operator==(const FactBase&, const FactBase&) = default;
};

// Short symbol stem per attribute: cat1, col3, lab2 ...
inline std::string symbol_prefix(AttributeName a) {
  switch (a) {
    case AttributeName::category: return "cat";
    case AttributeName::color: return "col";
    case AttributeName::functionality: return "fun";
    case AttributeName::label: return "lab";
    case AttributeName::location: return "loc";
    case AttributeName::owner: return "own";
    case AttributeName::restriction: return "res";
    case AttributeName::size: return "siz";
    case AttributeName::weight: return "wei";
  }
  return "sym";
}

inline constexpr std::string_view kAnonymousPrefix = "anon";

}  // namespace eavfoil::induction
