#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eavfoil/grounder/grounder.hpp"
#include "eavfoil/induction/induce.hpp"
#include "eavfoil/induction/translate.hpp"
#include "eavfoil/kb/knowledge_base.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/nlu/nlu.hpp"
#include "eavfoil/nlu/replies.hpp"
#include "eavfoil/perception/scene.hpp"
#include "eavfoil/reasoner/reasoner.hpp"

namespace eavfoil::service {

// Language and embedding data shared read-only by all sessions.
struct Resources {
  nlu::Nlu nlu;
  nlu::ReplyBook replies;
  grounder::EmbeddingTable embeddings;

  // patterns.txt, lexicon.txt and replies.txt from one directory.
  static std::shared_ptr<const Resources> load(const std::string& pattern_path,
                                               const std::string& embeddings_path) {
    const std::string dir = directory_of(pattern_path);
    auto r = std::make_shared<Resources>();
    r->nlu = nlu::Nlu::load(pattern_path, dir + "lexicon.txt");
    r->replies = nlu::ReplyBook::load(dir + "replies.txt");
    r->embeddings = grounder::EmbeddingTable::load(embeddings_path);
    return r;
  }

  static std::string directory_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
  }
};

struct SessionConfig {
  induction::InduceParams induce;
  induction::TranslateOptions translate;
  reasoner::DisambiguationParams disambiguation;
  double iou_threshold = perception::kDefaultIouThreshold;
  std::string inference_log_path;  // empty: no log file
};

struct TranscriptEntry {
  std::string speaker;  // "human" or "robot"
  std::string text;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct TurnEffect {
  nlu::DialogueAct act = nlu::DialogueAct::unknown;
  std::optional<EntityId> grounded;
  std::optional<nlu::AttributeStatement> statement;
  std::optional<RevisionOutcome> outcome;
  std::optional<Query> query;
  std::optional<induction::RuleSet> rules;
  std::optional<reasoner::QueryAnswer> answer;
  std::string failure;  // why the turn changed nothing, when it did not
};

struct TurnResult {
  std::string reply;
  TurnEffect effect;
};

inline std::string surface(const std::string& token) {
  std::string out = token;
  for (char& c : out) {
    if (c == '_') c = ' ';
  }
  return out;
}

inline std::string id_list(const std::vector<EntityId>& ids) {
  if (ids.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i].str();
  return out;
}

// One dialogue with its own KB. Every public method is atomic with respect
// to the others; turns run in the order callers acquire the session.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const Resources> resources, SessionConfig config = {})
      : id_(std::move(id)), resources_(std::move(resources)), config_(std::move(config)) {
    if (!resources_) throw InvalidArgument("session needs resources");
  }

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }

  std::vector<perception::IngestedDetection> ingest_scene(const perception::SceneFrame& frame) {
    std::lock_guard lock(mu_);
    auto out = perception::ingest_scene(frame, kb_, config_.iou_threshold);
    for (const auto& d : out) candidates_[d.entity] = d.detection.candidates;
    return out;
  }

  TurnResult handle_utterance(std::string_view text) {
    std::lock_guard lock(mu_);
    if (nlu::trim(text).empty()) throw InvalidArgument("empty utterance");
    TurnResult result = run_turn(text);
    transcript_.push_back({"human", std::string(text)});
    transcript_.push_back({"robot", result.reply});
    return result;
  }

  // Learns rules for `query` on a snapshot and installs them.
  induction::RuleSet induce(const Query& query) {
    KnowledgeBase snapshot = this->snapshot();
    induction::RuleSet rules = learn(snapshot, query, config_.translate);
    std::lock_guard lock(mu_);
    rulesets_[normalized(query)] = rules;
    return rules;
  }

  std::vector<reasoner::InferenceRecord> apply(const Query& query) {
    std::lock_guard lock(mu_);
    auto it = rulesets_.find(normalized(query));
    if (it == rulesets_.end()) {
      throw NotFoundError("no rules induced for " + to_string(normalized(query)));
    }
    auto records = reasoner::apply_rules(kb_, it->second, it->first);
    for (const auto& r : records) inference_log_.push_back(reasoner::format_log_line(r));
    if (!config_.inference_log_path.empty()) reasoner::append_log(config_.inference_log_path, records);
    return records;
  }

  reasoner::QueryAnswer answer(const Query& query) const {
    std::lock_guard lock(mu_);
    induction::RuleSet none;
    auto it = rulesets_.find(normalized(query));
    return reasoner::answer_query(kb_, it == rulesets_.end() ? none : it->second, normalized(query));
  }

  // Re-ranks the retained detection candidates of an entity using rules
  // learned, per candidate category, from every other entity.
  std::string disambiguate(const EntityId& entity) {
    std::lock_guard lock(mu_);
    kb_.get_entity(entity);
    auto cit = candidates_.find(entity);
    if (cit == candidates_.end()) throw NotFoundError("no detection candidates for " + entity.str());
    induction::TranslateOptions opts = config_.translate;
    opts.exclude.insert(entity);
    std::map<std::string, induction::RuleSet> rules;
    for (const auto& c : cit->second) {
      try {
        rules[c.category] = learn(kb_, Query{AttributeName::category, c.category}, opts);
      } catch (const Error&) {
        // no other entity has a category: nothing to learn from
      }
    }
    return reasoner::disambiguate_category(kb_, entity, cit->second, rules, config_.disambiguation);
  }

  KnowledgeBase snapshot() const {
    std::lock_guard lock(mu_);
    return kb_;
  }

  std::map<Query, induction::RuleSet> rulesets() const {
    std::lock_guard lock(mu_);
    return rulesets_;
  }

  std::vector<TranscriptEntry> transcript() const {
    std::lock_guard lock(mu_);
    return transcript_;
  }

  std::vector<std::string> inference_log() const {
    std::lock_guard lock(mu_);
    return inference_log_;
  }

  std::optional<EntityId> last_grounded() const {
    std::lock_guard lock(mu_);
    return last_grounded_;
  }

  std::map<EntityId, std::vector<perception::CategoryCandidate>> candidates() const {
    std::lock_guard lock(mu_);
    return candidates_;
  }

  void save(const std::string& path) const { save_kb_file(snapshot(), path); }

  // Replaces the KB. Grounding state and rules from the old KB are dropped.
  void load(const std::string& path) {
    KnowledgeBase kb = load_kb_file(path);
    std::lock_guard lock(mu_);
    kb_ = std::move(kb);
    last_grounded_.reset();
    rulesets_.clear();
    candidates_.clear();
  }

  void replace_kb(KnowledgeBase kb) {
    std::lock_guard lock(mu_);
    kb_ = std::move(kb);
    last_grounded_.reset();
    rulesets_.clear();
    candidates_.clear();
  }

 private:
  static Query normalized(const Query& q) { return Query{q.attribute, normalize_value(q.value)}; }

  induction::RuleSet learn(const KnowledgeBase& kb, const Query& query,
                           const induction::TranslateOptions& opts) const {
    induction::FactBase fb = induction::translate(kb, normalized(query), opts);
    return induction::induce(fb, config_.induce);
  }

  std::string reply(const std::string& key, std::map<std::string, std::string> slots = {}) const {
    return resources_->replies.render(key, slots);
  }

  TurnResult run_turn(std::string_view text) {
    const nlu::Nlu& nlu = resources_->nlu;
    nlu::Interpretation in = nlu.interpret(text);
    TurnResult r;
    r.effect.act = in.act;
    switch (in.act) {
      case nlu::DialogueAct::greeting:
        r.reply = reply("greeting");
        break;
      case nlu::DialogueAct::reference:
        reference_turn(in, r);
        break;
      case nlu::DialogueAct::attribute_assignment:
        assignment_turn(in, r);
        break;
      case nlu::DialogueAct::rule_query:
        query_turn(in, r);
        break;
      case nlu::DialogueAct::unknown:
        r.reply = reply("unknown");
        r.effect.failure = "no pattern matched";
        break;
    }
    return r;
  }

  void reference_turn(const nlu::Interpretation& in, TurnResult& r) {
    nlu::ReferentialExpression ref;
    grounder::GroundingResult g;
    try {
      ref = resources_->nlu.reference_of(in);
      g = grounder::ground(ref, kb_, resources_->embeddings);
    } catch (const Error& e) {
      r.reply = reply("reference/ungroundable");
      r.effect.failure = e.what();
      return;
    }
    last_grounded_ = g.entity;
    r.effect.grounded = g.entity;
    std::string symbols;
    for (const auto& s : ref.symbols) symbols += (symbols.empty() ? "" : " ") + surface(s);
    if (ref.location) {
      r.effect.statement = nlu::AttributeStatement{AttributeName::location, *ref.location};
      r.effect.outcome = kb_.revise_attribute(g.entity, AttributeName::location, *ref.location,
                                              Provenance::dialog());
      r.reply = reply("reference", {{"symbols", symbols}, {"location", ref.location_phrase}});
    } else {
      r.reply = reply("reference/nolocation", {{"symbols", symbols}});
    }
  }

  void assignment_turn(const nlu::Interpretation& in, TurnResult& r) {
    const nlu::PatternRule& rule = resources_->nlu.rules().at(*in.rule);
    const std::string attr = rule.attribute ? std::string(to_string(*rule.attribute)) : "";
    if (!last_grounded_) {
      r.reply = reply("assignment/no_antecedent");
      r.effect.failure = "no grounded entity to assign to";
      return;
    }
    nlu::AttributeStatement st;
    try {
      st = resources_->nlu.statement_of(in);
    } catch (const Error& e) {
      r.reply = reply("assignment/missing_value", {{"attr", attr}});
      r.effect.failure = e.what();
      return;
    }
    r.effect.statement = st;
    r.effect.grounded = last_grounded_;
    r.effect.outcome = kb_.revise_attribute(*last_grounded_, st.attribute, st.value, Provenance::dialog());
    std::map<std::string, std::string> slots{{"attr", attr}, {"value", surface(st.value)}};
    for (const auto& [role, span] : in.frame.elements) {
      if (role != "lexical_unit") slots[role] = in.element_text(role);
    }
    r.reply = reply("assignment/" + rule.frame, slots);
  }

  void query_turn(const nlu::Interpretation& in, TurnResult& r) {
    nlu::AttributeStatement st;
    try {
      st = resources_->nlu.statement_of(in);
    } catch (const Error& e) {
      r.reply = reply("unknown");
      r.effect.failure = e.what();
      return;
    }
    const Query query{st.attribute, st.value};
    r.effect.query = query;
    induction::RuleSet rules;
    try {
      rules = learn(kb_, query, config_.translate);
    } catch (const Error& e) {
      r.reply = reply("rule_query/empty", {{"attr", std::string(to_string(query.attribute))}});
      r.effect.failure = e.what();
      return;
    }
    rulesets_[query] = rules;
    r.effect.rules = rules;
    auto answer = reasoner::answer_query(kb_, rules, query);
    r.effect.answer = answer;
    std::map<std::string, std::string> slots{{"target", query.value},
                                             {"direct", id_list(answer.direct)},
                                             {"inferred", id_list(answer.inferred)}};
    if (rules.empty()) {
      r.reply = reply("rule_query/no_rule", slots);
    } else {
      std::string text;
      for (const auto& c : rules.clauses) text += (text.empty() ? "" : " ") + induction::render_clause(c);
      slots["rules"] = text;
      r.reply = reply("rule_query", slots);
    }
  }

  const std::string id_;
  std::shared_ptr<const Resources> resources_;
  SessionConfig config_;

  mutable std::mutex mu_;
  KnowledgeBase kb_;
  std::optional<EntityId> last_grounded_;
  std::map<Query, induction::RuleSet> rulesets_;
  std::map<EntityId, std::vector<perception::CategoryCandidate>> candidates_;
  std::vector<TranscriptEntry> transcript_;
  std::vector<std::string> inference_log_;
};

class SessionManager {
 public:
  explicit SessionManager(std::shared_ptr<const Resources> resources, SessionConfig config = {})
      : resources_(std::move(resources)), config_(std::move(config)) {}

  std::shared_ptr<Session> create() {
    std::lock_guard lock(mu_);
    std::string id = "s" + std::to_string(++counter_);
    auto s = std::make_shared<Session>(id, resources_, config_);
    sessions_.emplace(id, s);
    return s;
  }

  std::shared_ptr<Session> get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

 private:
  std::shared_ptr<const Resources> resources_;
  SessionConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace eavfoil::service
