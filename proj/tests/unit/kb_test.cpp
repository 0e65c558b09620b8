#include <gtest/gtest.h>

#include <set>

#include "eavfoil/kb/knowledge_base.hpp"
#include "test_support.hpp"

namespace eavfoil {
namespace {

AttributeMap fruit(const std::string& cat, const std::string& color, const std::string& owner) {
  return {{AttributeName::category, {cat, Provenance::vision(1.0)}},
          {AttributeName::color, {color, Provenance::vision(1.0)}},
          {AttributeName::owner, {owner, Provenance::dialog()}}};
}

KnowledgeBase fruit_kb() {
  KnowledgeBase kb;
  kb.create_entity(fruit("apple", "red", "harry"));
  kb.create_entity(fruit("pear", "green", "harry"));
  kb.create_entity(fruit("pear", "yellow", "hermoine"));
  kb.create_entity(fruit("apple", "yellow", "hermoine"));
  return kb;
}

TEST(Attribute, ParsesCanonicalNamesAndAliases) {
  for (AttributeName a : kAllAttributes) EXPECT_EQ(parse_attribute(to_string(a)), a);
  EXPECT_EQ(parse_attribute("position"), AttributeName::location);
  EXPECT_EQ(parse_attribute("Ownership"), AttributeName::owner);
  EXPECT_EQ(parse_attribute("shape"), std::nullopt);
  EXPECT_THROW(require_attribute("shape"), InvalidArgument);
}

TEST(Attribute, CanonicalOrderIsAlphabetical) {
  for (std::size_t i = 1; i < kAllAttributes.size(); ++i) {
    EXPECT_LT(to_string(kAllAttributes[i - 1]), to_string(kAllAttributes[i]));
    EXPECT_LT(kAllAttributes[i - 1], kAllAttributes[i]);
  }
  EXPECT_TRUE(is_visual(AttributeName::category));
  EXPECT_TRUE(is_visual(AttributeName::color));
  EXPECT_FALSE(is_visual(AttributeName::owner));
}

TEST(Attribute, NormalizeValue) {
  EXPECT_EQ(normalize_value("  On The   Table "), "on_the_table");
  EXPECT_EQ(normalize_value("Kitchenware"), "kitchenware");
  EXPECT_EQ(normalize_value(""), "");
  EXPECT_EQ(normalize_value("\t\n"), "");
}

TEST(Attribute, NormalizeIsIdempotentOnRandomStrings) {
  testing::Rng rng(7);
  const std::string alphabet = "aZ _\t-x9\n";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    for (std::size_t n = rng.below(12); n > 0; --n) s.push_back(alphabet[rng.below(alphabet.size())]);
    const std::string once = normalize_value(s);
    EXPECT_EQ(normalize_value(once), once) << "input '" << s << "'";
  }
}

TEST(KnowledgeBase, CreateEntityAssignsFreshIds) {
  KnowledgeBase kb;
  EntityId a = kb.create_entity(fruit("apple", "red", "harry"));
  EXPECT_EQ(a.str(), "obj1");
  EXPECT_EQ(kb.get_entity(a).find(AttributeName::category)->value, "apple");
  EntityId b = kb.create_entity();
  EXPECT_TRUE(kb.get_entity(b).assignments.empty());
  EntityId c = kb.create_entity(fruit("apple", "red", "harry"));
  EXPECT_NE(a, c);
  EXPECT_EQ(kb.size(), 3u);
  EXPECT_EQ(kb.revision(), 3u);
}

TEST(KnowledgeBase, CreateEntityRejectsBadAssignments) {
  KnowledgeBase kb;
  EXPECT_THROW(kb.create_entity({{AttributeName::color, {"  ", Provenance::dialog()}}}), InvalidArgument);
  EXPECT_THROW(kb.create_entity({{AttributeName::color, {"red", Provenance::vision(1.5)}}}), InvalidArgument);
  EXPECT_EQ(kb.revision(), 0u);
}

TEST(KnowledgeBase, ReviseFollowsPrecedence) {
  KnowledgeBase kb;
  EntityId mug = kb.create_entity();
  EXPECT_EQ(kb.revise_attribute(mug, AttributeName::owner, "mary", Provenance::dialog()), RevisionOutcome::created);
  EXPECT_EQ(kb.revise_attribute(mug, AttributeName::owner, "toby", Provenance::inferred(0.9, "r")),
            RevisionOutcome::rejected);
  EXPECT_EQ(kb.get_entity(mug).find(AttributeName::owner)->value, "mary");

  EntityId cup = kb.create_entity();
  EXPECT_EQ(kb.revise_attribute(cup, AttributeName::location, "on_table", Provenance::inferred(1.0, "r")),
            RevisionOutcome::created);
  EXPECT_EQ(kb.get_entity(cup).find(AttributeName::location)->provenance.source, Source::inferred);
}

TEST(KnowledgeBase, ReviseNormalizesAndCountsRevisions) {
  KnowledgeBase kb;
  EntityId id = kb.create_entity();
  const auto before = kb.revision();
  kb.revise_attribute(id, AttributeName::location, "On the  Table", Provenance::dialog());
  EXPECT_EQ(kb.get_entity(id).find(AttributeName::location)->value, "on_the_table");
  EXPECT_EQ(kb.revision(), before + 1);
  kb.revise_attribute(id, AttributeName::location, "shelf", Provenance::inferred(1.0, ""));
  EXPECT_EQ(kb.revision(), before + 1);
}

TEST(KnowledgeBase, ReviseUnknownEntityThrows) {
  KnowledgeBase kb;
  try {
    kb.revise_attribute(EntityId("obj9"), AttributeName::owner, "mary", Provenance::dialog());
    FAIL();
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("no such entity"), std::string::npos);
  }
  EXPECT_THROW(kb.get_entity(EntityId("obj9")), NotFoundError);
}

// Every (held, incoming) pair of sources against the lattice
// dialog > vision > inferred, where inferred never replaces anything.
TEST(KnowledgeBase, PrecedenceLatticeExhaustive) {
  const Source all[] = {Source::inferred, Source::vision, Source::dialog};
  auto rank = [](Source s) { return s == Source::dialog ? 2 : s == Source::vision ? 1 : 0; };
  for (Source held : all) {
    for (Source incoming : all) {
      KnowledgeBase kb;
      EntityId id = kb.create_entity();
      kb.revise_attribute(id, AttributeName::color, "red", {held, 1.0, {}});
      auto out = kb.revise_attribute(id, AttributeName::color, "blue", {incoming, 1.0, {}});
      const bool expect_write = incoming != Source::inferred && rank(incoming) >= rank(held);
      EXPECT_EQ(out == RevisionOutcome::overwritten, expect_write)
          << to_string(held) << " <- " << to_string(incoming);
      EXPECT_EQ(kb.get_entity(id).find(AttributeName::color)->value, expect_write ? "blue" : "red");
    }
  }
}

TEST(KnowledgeBase, QueryEntities) {
  KnowledgeBase kb = fruit_kb();
  auto h = kb.query_entities(AttributeName::owner, "hermoine");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].str(), "obj3");
  EXPECT_EQ(h[1].str(), "obj4");
  EXPECT_TRUE(kb.query_entities(AttributeName::owner, "nobody").empty());
  EXPECT_TRUE(kb.query_entities(AttributeName::label, "toy").empty());
  EXPECT_EQ(kb.query_entities(AttributeName::owner, " Hermoine ").size(), 2u);
}

TEST(KnowledgeBase, RestoreKeepsIdsUnique) {
  std::vector<Entity> es{{EntityId("obj4"), {}}, {EntityId("obj2"), {}}};
  KnowledgeBase kb = KnowledgeBase::restore(10, es);
  EXPECT_EQ(kb.revision(), 10u);
  EXPECT_EQ(kb.create_entity().str(), "obj5");
  es.push_back({EntityId("obj2"), {}});
  EXPECT_THROW(KnowledgeBase::restore(1, es), InvalidArgument);
}

TEST(KnowledgeBase, IdsNeverRepeatOnRandomKbs) {
  testing::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    auto r = testing::random_kb(rng);
    std::set<EntityId> ids;
    for (const Entity& e : r.kb.entities()) EXPECT_TRUE(ids.insert(e.id).second);
    for (const Entity& e : r.kb.entities()) EXPECT_EQ(r.kb.get_entity(e.id).id, e.id);
  }
}

}  // namespace
}  // namespace eavfoil
