#include <gtest/gtest.h>

#include <filesystem>

#include "eavfoil/kb/snapshot.hpp"
#include "test_support.hpp"

namespace eavfoil {
namespace {

TEST(Snapshot, FruitFileRoundTrips) {
  KnowledgeBase kb = load_kb_file(testing::data_path("kb/fruits.json"));
  ASSERT_EQ(kb.size(), 4u);
  EXPECT_EQ(kb.revision(), 4u);
  EXPECT_EQ(kb.entities()[2].find(AttributeName::owner)->value, "hermoine");
  EXPECT_EQ(load_kb(save_kb(kb)), kb);
}

TEST(Snapshot, EmptyKbRoundTrips) {
  KnowledgeBase kb;
  EXPECT_EQ(save_kb(kb), "{\"revision\": 0, \"entities\": []}\n");
  EXPECT_EQ(load_kb(save_kb(kb)), kb);
}

TEST(Snapshot, OneRecordPerLine) {
  KnowledgeBase kb;
  kb.create_entity({{AttributeName::color, {"red", Provenance::vision(0.25)}}});
  EntityId b = kb.create_entity();
  kb.revise_attribute(b, AttributeName::owner, "mary", Provenance::inferred(0.5, "mary(A) :- red(A)."));
  EXPECT_EQ(save_kb(kb),
            "{\"revision\": 3, \"entities\": [\n"
            "  {\"id\":\"obj1\",\"attrs\":{\"color\":{\"v\":\"red\",\"src\":\"vision\",\"conf\":0.25}}},\n"
            "  {\"id\":\"obj2\",\"attrs\":{\"owner\":{\"v\":\"mary\",\"src\":\"inferred\",\"conf\":0.5,"
            "\"rule\":\"mary(A) :- red(A).\"}}}\n"
            "]}\n");
}

TEST(Snapshot, DuplicateIdIsParseError) {
  const char* doc = R"({"revision": 2, "entities": [{"id": "obj1", "attrs": {}}, {"id": "obj1", "attrs": {}}]})";
  EXPECT_THROW(load_kb(doc), ParseError);
}

TEST(Snapshot, MalformedJsonReportsLineAndColumn) {
  try {
    load_kb("{\"revision\": 1,\n \"entities\": [,]}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
    EXPECT_EQ(std::string(e.what()).rfind("line 2, column", 0), 0u) << e.what();
  }
}

TEST(Snapshot, StructuralErrorsNameTheField) {
  auto message = [](const char* doc) {
    try {
      load_kb(doc);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"entities": []})").find("revision"), std::string::npos);
  EXPECT_NE(message(R"({"revision": -1, "entities": []})").find("revision"), std::string::npos);
  EXPECT_NE(message(R"({"revision": 0, "entities": [{"attrs": {}}]})").find("entities[0]"), std::string::npos);
  EXPECT_NE(message(R"({"revision": 0, "entities": [{"id": "a", "attrs": {"shape": {"v": "x"}}}]})")
                .find("shape"),
            std::string::npos);
  EXPECT_NE(message(R"({"revision": 0, "entities": [{"id": "a", "attrs": {"color": {"v": "x", "src": "oracle"}}}]})")
                .find("src"),
            std::string::npos);
  EXPECT_NE(message(R"({"revision": 0, "entities": [{"id": "a", "attrs": {"color": {"v": "x", "conf": 2}}}]})")
                .find("confidence"),
            std::string::npos);
  EXPECT_NE(message("[1, 2]").find("object"), std::string::npos);
}

TEST(Snapshot, MissingFileIsNotFound) {
  EXPECT_THROW(load_kb_file("/nonexistent/kb.json"), NotFoundError);
}

TEST(Snapshot, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "eavfoil_snapshot_test.json";
  KnowledgeBase kb = load_kb_file(testing::data_path("kb/fruits.json"));
  save_kb_file(kb, path.string());
  EXPECT_EQ(load_kb_file(path.string()), kb);
  std::filesystem::remove(path);
}

TEST(Snapshot, RandomKbsRoundTripWithProvenance) {
  testing::Rng rng(23);
  const std::vector<std::string> rules = {"", "t(A) :- true.", "x'y \"q\" \\ z"};
  for (int i = 0; i < 300; ++i) {
    auto r = testing::random_kb(rng);
    KnowledgeBase& kb = r.kb;
    for (const Entity& e : std::vector<Entity>(kb.entities())) {
      if (rng.chance(0.5)) {
        double conf = rng.unit();
        kb.revise_attribute(e.id, AttributeName::weight, "w" + std::to_string(rng.below(3)),
                            rng.chance(0.5) ? Provenance::vision(conf) : Provenance::inferred(conf, rng.pick(rules)));
      }
    }
    KnowledgeBase back = load_kb(save_kb(kb));
    ASSERT_EQ(back, kb) << save_kb(kb);
    EXPECT_EQ(save_kb(back), save_kb(kb));
  }
}

}  // namespace
}  // namespace eavfoil
