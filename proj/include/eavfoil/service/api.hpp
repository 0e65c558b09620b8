#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eavfoil/induction/clause.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/perception/scene.hpp"
#include "eavfoil/service/session.hpp"

namespace eavfoil::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class BadRequest : public Error {
 public:
  BadRequest(std::string field, const std::string& what) : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline nlohmann::ordered_json ruleset_to_json(const Query& query, const induction::RuleSet& rules) {
  nlohmann::ordered_json clauses = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rules.clauses.size(); ++i) {
    nlohmann::ordered_json c;
    c["text"] = induction::render_clause(rules.clauses[i]);
    if (i < rules.stats.size()) {
      c["tp"] = rules.stats[i].true_positive;
      c["fp"] = rules.stats[i].false_positive;
      c["m_estimate"] = rules.stats[i].m_estimate;
    }
    clauses.push_back(std::move(c));
  }
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (AttributeName a : rules.columns) columns.push_back(std::string(to_string(a)));
  nlohmann::ordered_json out;
  out["attribute"] = std::string(to_string(query.attribute));
  out["value"] = query.value;
  out["columns"] = std::move(columns);
  out["rules"] = induction::render_rules(rules);
  out["clauses"] = std::move(clauses);
  return out;
}

inline nlohmann::ordered_json ids_to_json(const std::vector<EntityId>& ids) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

inline nlohmann::ordered_json record_to_json(const reasoner::InferenceRecord& r) {
  nlohmann::ordered_json out;
  out["entity"] = r.entity.str();
  out["attribute"] = std::string(to_string(r.attribute));
  out["value"] = r.value;
  out["rule"] = r.rule_text;
  out["fired_at_revision"] = r.fired_at_revision;
  out["log"] = reasoner::format_log_line(r);
  return out;
}

inline nlohmann::ordered_json turn_to_json(const TurnResult& t, std::uint64_t revision) {
  nlohmann::ordered_json out;
  out["reply"] = t.reply;
  out["act"] = std::string(nlu::to_string(t.effect.act));
  out["grounded"] = t.effect.grounded ? nlohmann::ordered_json(t.effect.grounded->str()) : nullptr;
  if (t.effect.statement) {
    out["statement"] = {{"attribute", std::string(to_string(t.effect.statement->attribute))},
                        {"value", t.effect.statement->value}};
  }
  if (t.effect.outcome) out["outcome"] = std::string(to_string(*t.effect.outcome));
  if (t.effect.query && t.effect.rules) out["ruleset"] = ruleset_to_json(*t.effect.query, *t.effect.rules);
  if (t.effect.answer) {
    out["direct"] = ids_to_json(t.effect.answer->direct);
    out["inferred"] = ids_to_json(t.effect.answer->inferred);
  }
  if (!t.effect.failure.empty()) out["failure"] = t.effect.failure;
  out["revision"] = revision;
  return out;
}

// Transport-independent router for the session API. Paths:
//   POST /session
//   POST /session/{id}/scene | utterance | induce | apply | save | load | disambiguate
//   GET  /session/{id}/kb | rules | transcript
class Api {
 public:
  explicit Api(std::shared_ptr<const Resources> resources, SessionConfig config = {})
      : sessions_(std::move(resources), std::move(config)) {}

  SessionManager& sessions() { return sessions_; }

  Response handle(std::string_view method, std::string_view path, std::string_view body) {
    try {
      return route(method, path, body);
    } catch (const BadRequest& e) {
      return error(400, e.what(), e.field());
    } catch (const ParseError& e) {
      return error(400, e.what());
    } catch (const NotFoundError& e) {
      return error(404, e.what());
    } catch (const InvalidArgument& e) {
      return error(400, e.what());
    } catch (const Error& e) {
      return error(422, e.what());
    }
  }

 private:
  static Response json_response(int status, const nlohmann::ordered_json& doc) {
    return {status, doc.dump(), "application/json"};
  }

  static Response error(int status, const std::string& what, const std::string& field = {}) {
    nlohmann::ordered_json doc;
    doc["error"] = what;
    if (!field.empty()) doc["field"] = field;
    return json_response(status, doc);
  }

  static std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < path.size()) {
      std::size_t slash = path.find('/', pos);
      if (slash == std::string_view::npos) slash = path.size();
      if (slash > pos) out.emplace_back(path.substr(pos, slash - pos));
      pos = slash + 1;
    }
    return out;
  }

  static nlohmann::json object_body(std::string_view body) {
    nlohmann::json doc;
    try {
      doc = eavfoil::detail::parse_json_text(body);
    } catch (const ParseError& e) {
      throw BadRequest("body", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw BadRequest("body", "request body must be a JSON object");
    return doc;
  }

  static std::string string_field(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw BadRequest(key, std::string("missing field '") + key + "'");
    if (!doc[key].is_string() || doc[key].get<std::string>().empty()) {
      throw BadRequest(key, std::string("field '") + key + "' must be a non-empty string");
    }
    return doc[key].get<std::string>();
  }

  static Query query_body(std::string_view body) {
    nlohmann::json doc = object_body(body);
    std::string attr = string_field(doc, "attribute");
    auto a = parse_attribute(attr);
    if (!a) throw BadRequest("attribute", "unknown attribute '" + attr + "'");
    std::string value = normalize_value(string_field(doc, "value"));
    if (value.empty()) throw BadRequest("value", "field 'value' must be a non-empty string");
    return Query{*a, value};
  }

  Response route(std::string_view method, std::string_view path, std::string_view body) {
    const auto seg = segments(path);
    if (seg.empty() || seg[0] != "session") return error(404, "no such endpoint");
    if (seg.size() == 1) {
      if (method != "POST") return error(405, "method not allowed");
      auto s = sessions_.create();
      return json_response(201, {{"id", s->id()}});
    }
    if (seg.size() != 3) return error(404, "no such endpoint");
    std::shared_ptr<Session> s = sessions_.get(seg[1]);
    const std::string& op = seg[2];

    if (method == "GET") {
      if (op == "kb") return {200, save_kb(s->snapshot()), "application/json"};
      if (op == "rules") {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const auto& [q, rules] : s->rulesets()) list.push_back(ruleset_to_json(q, rules));
        return json_response(200, {{"rulesets", std::move(list)}});
      }
      if (op == "transcript") {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const auto& t : s->transcript()) list.push_back({{"speaker", t.speaker}, {"text", t.text}});
        return json_response(200, {{"transcript", std::move(list)}});
      }
      return error(404, "no such endpoint");
    }
    if (method != "POST") return error(405, "method not allowed");

    if (op == "scene") {
      perception::SceneFrame frame;
      try {
        frame = perception::load_scene(body);
      } catch (const ParseError& e) {
        throw BadRequest("body", e.what());
      }
      auto ingested = s->ingest_scene(frame);
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& d : ingested) {
        nlohmann::ordered_json cands = nlohmann::ordered_json::array();
        for (const auto& c : d.detection.candidates) cands.push_back({{"cat", c.category}, {"conf", c.confidence}});
        list.push_back({{"id", d.entity.str()}, {"candidates", std::move(cands)}});
      }
      return json_response(200, {{"entities", std::move(list)}, {"revision", s->snapshot().revision()}});
    }
    if (op == "utterance") {
      std::string text = string_field(object_body(body), "text");
      if (nlu::trim(text).empty()) throw BadRequest("text", "field 'text' must be a non-empty string");
      TurnResult t = s->handle_utterance(text);
      return json_response(200, turn_to_json(t, s->snapshot().revision()));
    }
    if (op == "induce") {
      Query q = query_body(body);
      return json_response(200, ruleset_to_json(q, s->induce(q)));
    }
    if (op == "apply") {
      Query q = query_body(body);
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& r : s->apply(q)) list.push_back(record_to_json(r));
      return json_response(200, {{"records", std::move(list)}, {"revision", s->snapshot().revision()}});
    }
    if (op == "save") {
      std::string p = string_field(object_body(body), "path");
      s->save(p);
      return json_response(200, {{"path", p}, {"revision", s->snapshot().revision()}});
    }
    if (op == "load") {
      std::string p = string_field(object_body(body), "path");
      s->load(p);
      KnowledgeBase kb = s->snapshot();
      return json_response(200, {{"path", p}, {"revision", kb.revision()}, {"entities", kb.size()}});
    }
    if (op == "disambiguate") {
      std::string e = string_field(object_body(body), "entity");
      std::string chosen = s->disambiguate(EntityId(e));
      return json_response(200, {{"entity", e}, {"category", chosen}});
    }
    return error(404, "no such endpoint");
  }

  SessionManager sessions_;
};

}  // namespace eavfoil::service
