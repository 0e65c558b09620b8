#include <gtest/gtest.h>

#include <map>
#include <set>

#include "eavfoil/induction/induce.hpp"
#include "eavfoil/induction/problem_text.hpp"
#include "eavfoil/induction/translate.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

namespace eavfoil::induction {
namespace {

constexpr int kTrials = 400;

// Named symbols and (attribute, value) pairs of member entities are in
// one-to-one correspondence; anonymous symbols are used exactly once.
void check_bijection(const KnowledgeBase& kb, const Query& q, const FactBase& fb) {
  std::map<std::pair<AttributeName, std::string>, std::string> forward;
  std::map<std::string, std::pair<AttributeName, std::string>> backward;
  std::map<std::size_t, int> anon_uses;
  std::set<std::string> ids;
  for (const auto& s : fb.symbols) EXPECT_TRUE(ids.insert(s.id).second) << "duplicate symbol id " << s.id;
  for (const Example& ex : fb.examples) {
    for (std::size_t col = 0; col < fb.arity(); ++col) {
      const ValueSymbol& s = fb.symbols[ex.tuple[col]];
      if (s.anonymous()) {
        ++anon_uses[ex.tuple[col]];
        continue;
      }
      auto key = std::make_pair(s.attribute, *s.value);
      auto [f, fresh_f] = forward.emplace(key, s.id);
      EXPECT_EQ(f->second, s.id);
      auto [b, fresh_b] = backward.emplace(s.id, key);
      EXPECT_EQ(b->second, key);
    }
  }
  for (const auto& [idx, n] : anon_uses) EXPECT_EQ(n, 1) << fb.symbols[idx].id;
  std::set<std::pair<AttributeName, std::string>> cells;
  for (const Entity& e : kb.entities()) {
    if (!e.has(q.attribute)) continue;
    for (const auto& [a, asg] : e.assignments) {
      if (a != q.attribute) cells.insert({a, asg.value});
    }
  }
  EXPECT_EQ(cells.size(), forward.size());
  for (const auto& c : cells) EXPECT_TRUE(forward.contains(c));
}

// Column types hold for every tuple slot and every value fact.
void check_types(const FactBase& fb) {
  for (const Example& ex : fb.examples) {
    ASSERT_EQ(ex.tuple.size(), fb.arity());
    for (std::size_t col = 0; col < fb.arity(); ++col) {
      EXPECT_EQ(fb.symbols[ex.tuple[col]].attribute, fb.columns[col]);
    }
  }
  for (const auto& [pred, ext] : fb.value_facts) {
    for (std::size_t s : ext) {
      ASSERT_TRUE(fb.symbols[s].value);
      EXPECT_EQ(*fb.symbols[s].value, pred);
    }
  }
  for (std::size_t i = 1; i < fb.columns.size(); ++i) EXPECT_LT(fb.columns[i - 1], fb.columns[i]);
}

TEST(TranslationProperty, BijectionAndTypeSafety) {
  testing::Rng rng(101);
  for (int t = 0; t < kTrials; ++t) {
    auto r = testing::random_kb(rng);
    FactBase fb = translate(r.kb, r.query);
    SCOPED_TRACE(render_problem(fb));
    check_bijection(r.kb, r.query, fb);
    check_types(fb);
    EXPECT_EQ(std::find(fb.columns.begin(), fb.columns.end(), r.query.attribute), fb.columns.end());
  }
}

TEST(TranslationProperty, ProblemTextRoundTrip) {
  testing::Rng rng(102);
  for (int t = 0; t < kTrials; ++t) {
    auto r = testing::random_kb(rng);
    FactBase fb = translate(r.kb, r.query);
    const std::string text = render_problem(fb);
    FactBase back = parse_problem(text);
    ASSERT_EQ(back, fb) << text;
    EXPECT_EQ(render_problem(back), text);
  }
}

TEST(InduceProperty, MatchesBruteForceOracle) {
  testing::Rng rng(103);
  int with_solution = 0;
  for (int t = 0; t < kTrials; ++t) {
    auto r = testing::random_kb(rng);
    RuleSet rules = induce(translate(r.kb, r.query));
    auto found = oracle::consistent_full_cover(r.kb, r.query);
    if (!found) continue;
    ++with_solution;
    auto cov = oracle::coverage(r.kb, r.query, rules);
    EXPECT_EQ(cov.negatives_covered, 0u) << save_kb(r.kb) << to_string(r.query) << "\n" << render_rules(rules);
    EXPECT_EQ(cov.positives_covered, cov.positives) << save_kb(r.kb) << to_string(r.query) << "\n"
                                                    << render_rules(rules);
  }
  EXPECT_GE(with_solution, 200);
}

TEST(InduceProperty, ClausesWellFormed) {
  testing::Rng rng(104);
  for (int t = 0; t < kTrials; ++t) {
    auto r = testing::random_kb(rng);
    FactBase fb = translate(r.kb, r.query);
    RuleSet rules = induce(fb);
    ASSERT_EQ(rules.clauses.size(), rules.stats.size());
    EXPECT_EQ(rules.columns, fb.columns);
    const double prior = fb.positive_mass() / static_cast<double>(fb.examples.size());
    for (std::size_t i = 0; i < rules.clauses.size(); ++i) {
      const Clause& c = rules.clauses[i];
      EXPECT_EQ(c.arity, fb.arity());
      EXPECT_LE(c.body.size(), 3u);
      std::set<Literal> seen;
      for (const Literal& l : c.body) {
        EXPECT_TRUE(type_valid(l, fb));
        EXPECT_TRUE(seen.insert(l).second);
      }
      EXPECT_EQ(rules.stats[i], clause_stats(c, fb, 1.0, prior));
      EXPECT_GT(rules.stats[i].true_positive, 0.0);
      EXPECT_TRUE(rules.stats[i].false_positive == 0.0 || rules.stats[i].m_estimate > prior);
    }
    EXPECT_EQ(induce(fb), rules);
  }
}

TEST(InduceProperty, NoRulesWithoutPositives) {
  testing::Rng rng(105);
  for (int t = 0; t < 100; ++t) {
    auto r = testing::random_kb(rng);
    Query q{r.query.attribute, "absent_value"};
    EXPECT_TRUE(induce(translate(r.kb, q)).empty());
  }
}

}  // namespace
}  // namespace eavfoil::induction
