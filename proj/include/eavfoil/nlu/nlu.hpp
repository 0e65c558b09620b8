#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/kb/attribute.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/nlu/lexicon.hpp"
#include "eavfoil/nlu/pattern.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::nlu {

enum class DialogueAct { greeting, reference, attribute_assignment, rule_query, unknown };

inline constexpr std::string_view to_string(DialogueAct a) {
  switch (a) {
    case DialogueAct::greeting: return "greeting";
    case DialogueAct::reference: return "reference";
    case DialogueAct::attribute_assignment: return "attribute_assignment";
    case DialogueAct::rule_query: return "rule_query";
    case DialogueAct::unknown: return "unknown";
  }
  return "?";
}

inline std::optional<DialogueAct> parse_act(std::string_view s) {
  for (DialogueAct a : {DialogueAct::greeting, DialogueAct::reference,
                        DialogueAct::attribute_assignment, DialogueAct::rule_query}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

// Frame name used for shorthand lexicon patterns.
inline std::string default_frame(AttributeName a) {
  switch (a) {
    case AttributeName::owner: return "ownership";
    case AttributeName::label: return "labeling";
    case AttributeName::functionality: return "being_operational";
    case AttributeName::location: return "locative_relation";
    case AttributeName::weight: return "weight";
    case AttributeName::size: return "size";
    case AttributeName::restriction: return "restriction";
    default: return std::string(to_string(a));
  }
}

struct PatternRule {
  DialogueAct act = DialogueAct::unknown;
  std::string frame;
  Template pattern;
  std::optional<AttributeName> attribute;
  std::string value;  // literal, or an expression with {capture} slots
  std::size_t line = 0;  // 0 for lexicon shorthands
};

struct Frame {
  std::string frame_type;
  std::map<std::string, Span> elements;  // role -> token span
};

struct AttributeStatement {
  AttributeName attribute = AttributeName::label;
  std::string value;

  friend bool operator==(const AttributeStatement&, const AttributeStatement&) = default;
};

struct ReferentialExpression {
  std::vector<std::string> symbols;
  std::optional<std::string> location;
  std::string location_phrase;  // surface text, e.g. "on the table"

  friend bool operator==(const ReferentialExpression&, const ReferentialExpression&) = default;
};

struct Interpretation {
  DialogueAct act = DialogueAct::unknown;
  std::optional<std::size_t> rule;  // index into Nlu::rules()
  std::vector<std::string> tokens;
  Frame frame;

  std::string element_text(const std::string& role) const {
    auto it = frame.elements.find(role);
    if (it == frame.elements.end()) return {};
    return join(tokens, " ", it->second.begin, it->second.end);
  }
};

inline constexpr std::array<std::string_view, 15> kDeterminers = {
    "the", "a", "an", "this", "that", "these", "those", "my", "your",
    "his", "her", "its", "our", "their", "some"};

inline constexpr std::array<std::string_view, 11> kLocatives = {
    "on", "in", "under", "near", "behind", "inside", "beside", "at", "above", "below", "next"};

template <std::size_t N>
bool contains_word(const std::array<std::string_view, N>& words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

// Pattern table plus lexicon. Rules are tried by act (greeting, rule_query,
// attribute_assignment, reference), then in file order; lexicon
// shorthands close the assignment group.
class Nlu {
 public:
  static Nlu parse(std::string_view pattern_text, std::string_view lexicon_text) {
    Nlu nlu;
    nlu.lexicon_ = Lexicon::parse(lexicon_text);
    std::vector<PatternRule> parsed = parse_patterns(pattern_text);
    for (const Shorthand& s : nlu.lexicon_.shorthands()) {
      PatternRule r;
      r.act = DialogueAct::attribute_assignment;
      r.frame = default_frame(s.attribute);
      r.attribute = s.attribute;
      std::string src = "*";
      for (const auto& w : s.surface) src += w == "X" ? " {X+}" : " " + w;
      r.pattern = Template::parse(src);
      std::string value = s.value;
      if (auto p = value.find('X'); p != std::string::npos) value.replace(p, 1, "{X}");
      r.value = value;
      parsed.push_back(std::move(r));
    }
    for (DialogueAct act : {DialogueAct::greeting, DialogueAct::rule_query,
                            DialogueAct::attribute_assignment, DialogueAct::reference}) {
      for (const auto& r : parsed) {
        if (r.act == act) nlu.rules_.push_back(r);
      }
    }
    return nlu;
  }

  static Nlu load(const std::string& pattern_path, const std::string& lexicon_path) {
    return parse(eavfoil::detail::read_file(pattern_path), eavfoil::detail::read_file(lexicon_path));
  }

  Interpretation interpret(std::string_view text) const {
    Interpretation out;
    out.tokens = tokenize(text);
    if (out.tokens.empty()) throw InvalidArgument("empty utterance");
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      auto m = rules_[i].pattern.match(out.tokens);
      if (!m) continue;
      out.act = rules_[i].act;
      out.rule = i;
      out.frame.frame_type = rules_[i].frame;
      out.frame.elements = m->captures;
      if (rules_[i].act == DialogueAct::attribute_assignment ||
          rules_[i].act == DialogueAct::rule_query) {
        if (auto role = value_capture(rules_[i].value)) {
          auto it = out.frame.elements.find(*role);
          if (it != out.frame.elements.end()) {
            Span s = it->second;
            out.frame.elements.erase(it);
            out.frame.elements["lexical_unit"] = s;
          }
        } else {
          out.frame.elements["lexical_unit"] = m->element_spans.back();
        }
      }
      return out;
    }
    return out;
  }

  DialogueAct classify(std::string_view text) const { return interpret(text).act; }

  AttributeStatement parse_assignment(std::string_view text) const {
    Interpretation in = interpret(text);
    if (in.act != DialogueAct::attribute_assignment) {
      throw InvalidArgument("not an attribute assignment: '" + std::string(text) + "'");
    }
    return statement_of(in);
  }

  Query parse_rule_query(std::string_view text) const {
    Interpretation in = interpret(text);
    if (in.act != DialogueAct::rule_query) {
      throw InvalidArgument("unrecognized query form: '" + std::string(text) + "'");
    }
    AttributeStatement s = statement_of(in);
    return Query{s.attribute, s.value};
  }

  ReferentialExpression parse_reference(std::string_view text) const {
    Interpretation in = interpret(text);
    if (in.act != DialogueAct::reference) {
      throw InvalidArgument("not a reference: '" + std::string(text) + "'");
    }
    return reference_of(in);
  }

  // (attribute, value) carried by an assignment or query interpretation.
  AttributeStatement statement_of(const Interpretation& in) const {
    const PatternRule& rule = rules_.at(in.rule.value());
    if (!rule.attribute) throw Error("pattern at line " + std::to_string(rule.line) + " has no attribute");
    std::string value = rule.value;
    std::string out;
    std::size_t pos = 0;
    while (pos < value.size()) {
      std::size_t open = value.find('{', pos);
      if (open == std::string::npos) {
        out += value.substr(pos);
        break;
      }
      std::size_t close = value.find('}', open);
      if (close == std::string::npos) throw Error("unterminated slot in value '" + value + "'");
      out += value.substr(pos, open - pos);
      std::string name = value.substr(open + 1, close - open - 1);
      auto role = value_capture(value) == name ? std::string("lexical_unit") : name;
      auto it = in.frame.elements.find(role);
      if (it == in.frame.elements.end() || it->second.empty()) throw Error("missing frame element");
      out += lexicon_.canonical(join(in.tokens, "_", it->second.begin, it->second.end));
      pos = close + 1;
    }
    out = normalize_value(out);
    if (out.empty()) throw Error("missing frame element");
    return {*rule.attribute, out};
  }

  ReferentialExpression reference_of(const Interpretation& in) const {
    std::vector<std::string> phrase;
    if (auto it = in.frame.elements.find("np"); it != in.frame.elements.end()) {
      phrase.assign(in.tokens.begin() + static_cast<std::ptrdiff_t>(it->second.begin),
                    in.tokens.begin() + static_cast<std::ptrdiff_t>(it->second.end));
    } else {
      phrase = in.tokens;
    }
    std::size_t loc = phrase.size();
    for (std::size_t i = 1; i < phrase.size(); ++i) {
      if (contains_word(kLocatives, phrase[i])) {
        loc = i;
        break;
      }
    }
    ReferentialExpression ref;
    std::vector<std::string> noun;
    std::optional<std::size_t> noun_slot;
    for (std::size_t i = 0; i < loc; ++i) {
      const std::string& w = phrase[i];
      if (contains_word(kDeterminers, w)) continue;
      if (lexicon_.is_modifier(w)) {
        ref.symbols.push_back(lexicon_.canonical(w));
      } else {
        if (!noun_slot) {
          noun_slot = ref.symbols.size();
          ref.symbols.emplace_back();
        }
        noun.push_back(w);
      }
    }
    if (!noun_slot) throw Error("ungroundable reference");
    ref.symbols[*noun_slot] = lexicon_.canonical(join(noun, "_"));
    if (loc < phrase.size()) {
      std::vector<std::string> parts;
      for (std::size_t i = loc; i < phrase.size(); ++i) {
        if (!contains_word(kDeterminers, phrase[i])) parts.push_back(phrase[i]);
      }
      ref.location = lexicon_.canonical(join(parts, "_"));
      ref.location_phrase = join(phrase, " ", loc);
    }
    return ref;
  }

  const std::vector<PatternRule>& rules() const { return rules_; }
  const Lexicon& lexicon() const { return lexicon_; }

 private:
  // Name of the first {slot} in a value expression.
  static std::optional<std::string> value_capture(const std::string& value) {
    auto open = value.find('{');
    if (open == std::string::npos) return std::nullopt;
    auto close = value.find('}', open);
    if (close == std::string::npos) return std::nullopt;
    return value.substr(open + 1, close - open - 1);
  }

  // act <kind> | frame <type> | pattern <template> | attr <name> | value <expr>
  static std::vector<PatternRule> parse_patterns(std::string_view text) {
    std::vector<PatternRule> rules;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line = trim(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      PatternRule r;
      r.line = line_no;
      bool have_act = false, have_pattern = false;
      std::size_t start = 0;
      while (start <= line.size()) {
        std::size_t bar = line.find('|', start);
        if (bar == std::string::npos) bar = line.size();
        std::string field = trim(std::string_view(line).substr(start, bar - start));
        start = bar + 1;
        if (field.empty()) continue;
        std::size_t sp = field.find_first_of(" \t");
        std::string key = field.substr(0, sp);
        std::string rest = sp == std::string::npos ? std::string() : trim(field.substr(sp));
        try {
          if (key == "act") {
            auto act = parse_act(rest);
            if (!act) throw ParseError("unknown act '" + rest + "'", line_no);
            r.act = *act;
            have_act = true;
          } else if (key == "frame") {
            r.frame = rest == "-" ? std::string() : rest;
          } else if (key == "pattern") {
            r.pattern = Template::parse(rest);
            have_pattern = true;
          } else if (key == "attr") {
            if (rest != "-" && !rest.empty()) {
              auto a = parse_attribute(rest);
              if (!a) throw ParseError("unknown attribute '" + rest + "'", line_no);
              r.attribute = *a;
            }
          } else if (key == "value") {
            r.value = rest == "-" ? std::string() : rest;
          } else {
            throw ParseError("unknown field '" + key + "'", line_no);
          }
        } catch (const ParseError& e) {
          if (e.line() != 0) throw;
          throw ParseError(e.what(), line_no);
        }
      }
      if (!have_act || !have_pattern) throw ParseError("rule needs 'act' and 'pattern'", line_no);
      if ((r.act == DialogueAct::attribute_assignment || r.act == DialogueAct::rule_query) &&
          (!r.attribute || r.value.empty())) {
        throw ParseError("assignment and query rules need 'attr' and 'value'", line_no);
      }
      rules.push_back(std::move(r));
    }
    return rules;
  }

  std::vector<PatternRule> rules_;
  Lexicon lexicon_;
};

}  // namespace eavfoil::nlu
