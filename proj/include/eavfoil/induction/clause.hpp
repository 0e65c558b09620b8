#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "eavfoil/induction/factbase.hpp"

namespace eavfoil::induction {

// Membership test of one column's symbol in a value predicate.
struct Literal {
  std::string predicate;
  std::size_t column = 0;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  std::string target;
  std::size_t arity = 0;
  std::vector<Literal> body;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ClauseStats {
  double true_positive = 0;   // covered positive mass
  double false_positive = 0;  // covered negative mass
  double m_estimate = 0;

  friend bool operator==(const ClauseStats&, const ClauseStats&) = default;
};

struct RuleSet {
  std::string target;
  std::vector<AttributeName> columns;
  std::vector<Clause> clauses;
  std::vector<ClauseStats> stats;  // parallel to clauses

  bool empty() const { return clauses.empty(); }
  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

inline bool covers(const Clause& clause, const FactBase& fb, const Example& example) {
  for (const Literal& lit : clause.body) {
    if (!fb.holds(lit.predicate, example.tuple.at(lit.column))) return false;
  }
  return true;
}

// A literal is type-valid when its predicate holds for some symbol of the
// column's attribute.
inline bool type_valid(const Literal& lit, const FactBase& fb) {
  if (lit.column >= fb.columns.size()) return false;
  auto it = fb.value_facts.find(lit.predicate);
  if (it == fb.value_facts.end()) return false;
  for (std::size_t s : it->second) {
    if (fb.symbols[s].attribute == fb.columns[lit.column]) return true;
  }
  return false;
}

// (TP + m*prior) / (TP + FP + m); prior when the denominator vanishes.
inline double m_estimate(double tp, double fp, double m, double prior) {
  const double denom = tp + fp + m;
  if (denom <= 0) return prior;
  return (tp + m * prior) / denom;
}

inline ClauseStats clause_stats(const Clause& clause, const FactBase& fb, double m, double prior) {
  ClauseStats s;
  for (const Example& e : fb.examples) {
    if (!covers(clause, fb, e)) continue;
    s.true_positive += e.weight;
    s.false_positive += 1.0 - e.weight;
  }
  s.m_estimate = m_estimate(s.true_positive, s.false_positive, m, prior);
  return s;
}

inline double m_estimate(const Clause& clause, const FactBase& fb, double m, double prior) {
  return clause_stats(clause, fb, m, prior).m_estimate;
}

// Prolog atom, quoted unless it is a plain lowercase identifier.
inline std::string render_atom(const std::string& atom) {
  bool plain = !atom.empty() && std::islower(static_cast<unsigned char>(atom[0]));
  for (char c : atom) {
    plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  }
  if (plain) return atom;
  std::string out = "'";
  for (char c : atom) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "'";
}

// Head variables are A, B, C ... by column index.
inline std::string variable_name(std::size_t column) {
  std::string name(1, static_cast<char>('A' + column % 26));
  if (column >= 26) name += std::to_string(column / 26);
  return name;
}

inline std::string render_clause(const Clause& clause) {
  std::string out = render_atom(clause.target);
  if (clause.arity > 0) {
    out += "(";
    for (std::size_t i = 0; i < clause.arity; ++i) {
      if (i) out += ",";
      out += variable_name(i);
    }
    out += ")";
  }
  out += " :- ";
  if (clause.body.empty()) return out + "true.";
  for (std::size_t i = 0; i < clause.body.size(); ++i) {
    if (i) out += ", ";
    out += render_atom(clause.body[i].predicate) + "(" + variable_name(clause.body[i].column) + ")";
  }
  return out + ".";
}

inline std::string render_rules(const RuleSet& rules) {
  std::string out;
  for (const Clause& c : rules.clauses) out += render_clause(c) + "\n";
  return out;
}

}  // namespace eavfoil::induction
