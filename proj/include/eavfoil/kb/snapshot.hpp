#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "eavfoil/error.hpp"
#include "eavfoil/kb/knowledge_base.hpp"

namespace eavfoil {

namespace detail {

// 1-based (line, column) of a byte offset into text.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Parses JSON text, translating syntax errors to ParseError with position.
inline nlohmann::json parse_json_text(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // byte is 1-based and points one past the offending character.
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_column(text, offset);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(msg, line, col);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace detail

inline nlohmann::ordered_json entity_to_json(const Entity& e) {
  nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
  for (const auto& [name, a] : e.assignments) {
    nlohmann::ordered_json cell;
    cell["v"] = a.value;
    cell["src"] = std::string(to_string(a.provenance.source));
    cell["conf"] = a.provenance.confidence;
    if (!a.provenance.rule.empty()) cell["rule"] = a.provenance.rule;
    attrs[std::string(to_string(name))] = std::move(cell);
  }
  nlohmann::ordered_json rec;
  rec["id"] = e.id.str();
  rec["attrs"] = std::move(attrs);
  return rec;
}

// One entity record per line, in insertion order.
inline std::string save_kb(const KnowledgeBase& kb) {
  std::string out = "{\"revision\": " + std::to_string(kb.revision()) + ", \"entities\": [";
  const auto& entities = kb.entities();
  for (std::size_t i = 0; i < entities.size(); ++i) {
    out += i == 0 ? "\n  " : ",\n  ";
    out += entity_to_json(entities[i]).dump();
  }
  out += entities.empty() ? "]}\n" : "\n]}\n";
  return out;
}

inline KnowledgeBase kb_from_json(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw ParseError("KB document must be an object");
  if (!doc.contains("revision") || !doc["revision"].is_number_unsigned()) {
    throw ParseError("'revision' must be a non-negative integer");
  }
  if (!doc.contains("entities") || !doc["entities"].is_array()) {
    throw ParseError("'entities' must be an array");
  }
  std::vector<Entity> entities;
  std::size_t index = 0;
  for (const json& rec : doc["entities"]) {
    const std::string where = "entities[" + std::to_string(index++) + "]";
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string()) {
      throw ParseError(where + ": missing string 'id'");
    }
    Entity e{EntityId(rec["id"].get<std::string>()), {}};
    if (e.id.empty()) throw ParseError(where + ": empty id");
    if (rec.contains("attrs")) {
      if (!rec["attrs"].is_object()) throw ParseError(where + ": 'attrs' must be an object");
      for (const auto& [key, cell] : rec["attrs"].items()) {
        const std::string at = where + ".attrs." + key;
        auto attr = parse_attribute(key);
        if (!attr) throw ParseError(at + ": unknown attribute");
        if (e.assignments.contains(*attr)) throw ParseError(at + ": attribute given twice");
        if (!cell.is_object() || !cell.contains("v") || !cell["v"].is_string()) {
          throw ParseError(at + ": missing string 'v'");
        }
        Assignment a{cell["v"].get<std::string>(), Provenance::dialog()};
        if (cell.contains("src")) {
          auto src = cell["src"].is_string() ? parse_source(cell["src"].get<std::string>()) : std::nullopt;
          if (!src) throw ParseError(at + ": 'src' must be vision, dialog or inferred");
          a.provenance.source = *src;
        }
        if (cell.contains("conf")) {
          if (!cell["conf"].is_number()) throw ParseError(at + ": 'conf' must be a number");
          a.provenance.confidence = cell["conf"].get<double>();
        }
        if (cell.contains("rule")) {
          if (!cell["rule"].is_string()) throw ParseError(at + ": 'rule' must be a string");
          a.provenance.rule = cell["rule"].get<std::string>();
        }
        e.assignments.emplace(*attr, std::move(a));
      }
    }
    entities.push_back(std::move(e));
  }
  try {
    return KnowledgeBase::restore(doc["revision"].get<std::uint64_t>(), std::move(entities));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline KnowledgeBase load_kb(std::string_view document) {
  return kb_from_json(detail::parse_json_text(document));
}

inline void save_kb_file(const KnowledgeBase& kb, const std::string& path) {
  detail::write_file(path, save_kb(kb));
}

inline KnowledgeBase load_kb_file(const std::string& path) { return load_kb(detail::read_file(path)); }

}  // namespace eavfoil
