#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "eavfoil/induction/clause.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/nlu/text.hpp"
#include "eavfoil/perception/scene.hpp"
#include "eavfoil/service/session.hpp"

namespace eavfoil::cli {

enum class Mode { repl, batch };

struct CliConfig {
  std::string scene_path;  // may be empty when kb_path is set
  std::string embeddings_path;
  std::string patterns_path;
  std::string kb_path;
  Mode mode = Mode::repl;
  std::string script_path;
  service::SessionConfig session;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAssertion = 2;

inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, ptr);
}

inline std::string describe_entity(const Entity& e) {
  std::string out = e.id.str();
  for (const auto& [attr, a] : e.assignments) {
    out += "  " + std::string(to_string(attr)) + "=" + a.value + " [" + std::string(to_string(a.provenance.source));
    if (a.provenance.source != Source::dialog) out += " " + format_number(a.provenance.confidence);
    out += "]";
  }
  return out;
}

inline std::string describe_kb(const KnowledgeBase& kb) {
  std::string out = "kb revision " + std::to_string(kb.revision()) + ", " + std::to_string(kb.size()) + " entities\n";
  for (const Entity& e : kb.entities()) out += "  " + describe_entity(e) + "\n";
  return out;
}

inline std::string describe_rules(const Query& q, const induction::RuleSet& rules) {
  std::string out = "rules for " + to_string(q) + ":";
  if (rules.empty()) return out + " none\n";
  out += "\n";
  for (std::size_t i = 0; i < rules.clauses.size(); ++i) {
    out += "  " + induction::render_clause(rules.clauses[i]);
    if (i < rules.stats.size()) {
      const auto& s = rules.stats[i];
      out += "  % tp=" + format_number(s.true_positive) + " fp=" + format_number(s.false_positive) +
             " m=" + format_number(s.m_estimate);
    }
    out += "\n";
  }
  return out;
}

// Clause texts compare with any trailing '.' and surrounding blanks removed.
inline std::string clause_key(std::string_view text) {
  std::string s = nlu::trim(text);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return nlu::trim(s);
}

// Executes REPL/script lines against one session:
//   <utterance>                 a dialogue turn
//   :kb | :rules | :quit | :help
//   :induce ATTR VALUE | :apply ATTR VALUE | :disambiguate ENTITY
//   :save PATH | :load PATH
//   expect rule "CLAUSE"        the latest induced rule set contains CLAUSE
//   expect norule               the latest induced rule set is empty
//   expect reply "TEXT"         the latest robot reply equals TEXT
//   expect value ENTITY ATTR VALUE
//   # comment
class Runner {
 public:
  enum class Status { ok, quit, error, assertion_failed };

  Runner(service::Session& session, std::ostream& out) : session_(session), out_(out) {}

  Status execute(std::string_view raw) {
    const std::string line = nlu::trim(raw);
    if (line.empty() || line.front() == '#') return Status::ok;
    try {
      if (line.front() == ':') return command(line);
      if (line.rfind("expect ", 0) == 0 || line == "expect") return expectation(line);
      service::TurnResult t = session_.handle_utterance(line);
      last_reply_ = t.reply;
      if (t.effect.query && t.effect.rules) latest_ = {*t.effect.query, *t.effect.rules};
      out_ << "robot: " << t.reply << "\n";
      return Status::ok;
    } catch (const Error& e) {
      out_ << "error: " << e.what() << "\n";
      ++errors_;
      return Status::error;
    }
  }

  std::size_t errors() const { return errors_; }
  std::size_t failures() const { return failures_; }
  std::size_t passes() const { return passes_; }

  std::string report() const {
    std::string out = "== report ==\n" + describe_kb(session_.snapshot());
    for (const auto& [q, rules] : session_.rulesets()) out += describe_rules(q, rules);
    out += "expectations: " + std::to_string(passes_) + " passed, " + std::to_string(failures_) +
           " failed; errors: " + std::to_string(errors_) + "\n";
    return out;
  }

 private:
  static std::vector<std::string> words(const std::string& line) { return nlu::split_whitespace(line); }

  static Query query_args(const std::vector<std::string>& w) {
    if (w.size() < 3) throw InvalidArgument("usage: " + w[0] + " ATTR VALUE");
    std::string value;
    for (std::size_t i = 2; i < w.size(); ++i) value += (i > 2 ? " " : "") + w[i];
    return Query{require_attribute(w[1]), normalize_value(value)};
  }

  Status command(const std::string& line) {
    const auto w = words(line);
    const std::string& cmd = w[0];
    if (cmd == ":quit" || cmd == ":q") return Status::quit;
    if (cmd == ":help") {
      out_ << ":kb :rules :induce ATTR VALUE :apply ATTR VALUE :disambiguate ENTITY :save PATH :load PATH :quit\n";
    } else if (cmd == ":kb") {
      out_ << describe_kb(session_.snapshot());
    } else if (cmd == ":rules") {
      auto all = session_.rulesets();
      if (all.empty()) out_ << "no rules induced\n";
      for (const auto& [q, rules] : all) out_ << describe_rules(q, rules);
    } else if (cmd == ":induce") {
      Query q = query_args(w);
      induction::RuleSet rules = session_.induce(q);
      latest_ = {q, rules};
      out_ << describe_rules(q, rules);
    } else if (cmd == ":apply") {
      Query q = query_args(w);
      auto records = session_.apply(q);
      out_ << records.size() << " inferred\n";
      for (const auto& r : records) out_ << "  " << reasoner::format_log_line(r) << "\n";
    } else if (cmd == ":disambiguate") {
      if (w.size() != 2) throw InvalidArgument("usage: :disambiguate ENTITY");
      out_ << w[1] << " category=" << session_.disambiguate(EntityId(w[1])) << "\n";
    } else if (cmd == ":save") {
      if (w.size() != 2) throw InvalidArgument("usage: :save PATH");
      session_.save(w[1]);
      out_ << "saved " << w[1] << "\n";
    } else if (cmd == ":load") {
      if (w.size() != 2) throw InvalidArgument("usage: :load PATH");
      session_.load(w[1]);
      out_ << "loaded " << w[1] << "\n";
    } else {
      throw InvalidArgument("unknown command '" + cmd + "'");
    }
    return Status::ok;
  }

  static std::string quoted(const std::string& line, std::size_t from) {
    auto open = line.find('"', from);
    auto close = line.rfind('"');
    if (open == std::string::npos || close == open) throw InvalidArgument("expected a quoted argument");
    return line.substr(open + 1, close - open - 1);
  }

  Status verdict(bool ok, const std::string& line, const std::string& actual) {
    if (ok) {
      ++passes_;
      out_ << "pass: " << line << "\n";
      return Status::ok;
    }
    ++failures_;
    out_ << "FAIL: " << line << "\n  actual: " << actual << "\n";
    return Status::assertion_failed;
  }

  Status expectation(const std::string& line) {
    const auto w = words(line);
    if (w.size() < 2) throw InvalidArgument("usage: expect rule|norule|reply|value ...");
    if (w[1] == "rule" || w[1] == "norule") {
      if (!latest_) return verdict(false, line, "no rules induced yet");
      const auto& rules = latest_->second;
      std::string actual = rules.empty() ? "no rule" : clause_key(induction::render_rules(rules));
      if (w[1] == "norule") return verdict(rules.empty(), line, actual);
      const std::string want = clause_key(quoted(line, line.find("rule") + 4));
      bool found = false;
      for (const auto& c : rules.clauses) found = found || clause_key(induction::render_clause(c)) == want;
      return verdict(found, line, actual);
    }
    if (w[1] == "reply") {
      const std::string want = quoted(line, line.find("reply") + 5);
      return verdict(last_reply_ && *last_reply_ == want, line, last_reply_.value_or("no reply yet"));
    }
    if (w[1] == "value") {
      if (w.size() != 5) throw InvalidArgument("usage: expect value ENTITY ATTR VALUE");
      KnowledgeBase kb = session_.snapshot();
      const Entity& e = kb.get_entity(EntityId(w[2]));
      const Assignment* a = e.find(require_attribute(w[3]));
      return verdict(a && a->value == normalize_value(w[4]), line, a ? a->value : "unassigned");
    }
    throw InvalidArgument("unknown expectation '" + w[1] + "'");
  }

  service::Session& session_;
  std::ostream& out_;
  std::optional<std::string> last_reply_;
  std::optional<std::pair<Query, induction::RuleSet>> latest_;
  std::size_t errors_ = 0;
  std::size_t failures_ = 0;
  std::size_t passes_ = 0;
};

inline void require_file(const std::string& what, const std::string& path) {
  if (path.empty()) throw InvalidArgument("missing --" + what);
  if (!std::filesystem::is_regular_file(path)) throw NotFoundError("cannot open '" + path + "'");
}

// Builds the session named by `config`: the KB file is loaded first when
// given, then the scene is ingested into it.
inline std::unique_ptr<service::Session> open_session(const CliConfig& config) {
  if (config.scene_path.empty() && config.kb_path.empty()) throw InvalidArgument("missing --scene");
  if (!config.scene_path.empty()) require_file("scene", config.scene_path);
  if (!config.kb_path.empty()) require_file("kb", config.kb_path);
  require_file("embeddings", config.embeddings_path);
  require_file("patterns", config.patterns_path);
  auto resources = service::Resources::load(config.patterns_path, config.embeddings_path);
  auto session = std::make_unique<service::Session>("cli", resources, config.session);
  if (!config.kb_path.empty()) session->replace_kb(load_kb_file(config.kb_path));
  if (!config.scene_path.empty()) session->ingest_scene(perception::load_scene_file(config.scene_path));
  return session;
}

// Batch exit codes: 0 success, 1 any error, 2 an expectation failed (and no
// error). The REPL reports errors inline and exits 0.
inline int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  std::unique_ptr<service::Session> session;
  std::ifstream script;
  try {
    if (config.mode == Mode::batch) {
      require_file("batch", config.script_path);
      script.open(config.script_path);
      if (!script) throw NotFoundError("cannot open '" + config.script_path + "'");
    }
    session = open_session(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  Runner runner(*session, out);
  const bool batch = config.mode == Mode::batch;
  std::istream& source = batch ? static_cast<std::istream&>(script) : in;
  std::string line;
  while (true) {
    if (!batch) out << "> " << std::flush;
    if (!std::getline(source, line)) break;
    if (batch) {
      const std::string t = nlu::trim(line);
      if (t.empty() || t.front() == '#') continue;
      out << (t.front() == ':' || t.rfind("expect", 0) == 0 ? "$ " : "human: ") << t << "\n";
    }
    if (runner.execute(line) == Runner::Status::quit) break;
  }
  if (!batch) {
    out << "\n";
    return kExitOk;
  }
  out << runner.report();
  if (runner.errors()) return kExitError;
  if (runner.failures()) return kExitAssertion;
  return kExitOk;
}

}  // namespace eavfoil::cli
