#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/kb/attribute.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::nlu {

// "surface X -> attr X" entry; expands into an assignment pattern.
struct Shorthand {
  std::vector<std::string> surface;  // "X" marks the value slot
  AttributeName attribute;
  std::string value;  // canonical side, "X" marks the slot
};

// Value lexicon. Line forms:
//   surface → canonical        (ASCII "->" also accepted)
//   for X → owner X            (shorthand assignment pattern)
//   modifiers: w1 w2 ...       (words that stay separate in references)
class Lexicon {
 public:
  static Lexicon parse(std::string_view text) {
    Lexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line = trim(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      if (line.rfind("modifiers:", 0) == 0) {
        for (auto& w : split_whitespace(line.substr(10))) lex.modifiers_.insert(normalize_value(w));
        continue;
      }
      std::size_t arrow = line.find("→");
      std::size_t arrow_len = std::string_view("→").size();
      if (arrow == std::string::npos) {
        arrow = line.find("->");
        arrow_len = 2;
      }
      if (arrow == std::string::npos) throw ParseError("expected 'surface → canonical'", line_no);
      std::string lhs = trim(line.substr(0, arrow));
      std::string rhs = trim(line.substr(arrow + arrow_len));
      if (lhs.empty() || rhs.empty()) throw ParseError("empty side of lexicon entry", line_no);
      auto surface = split_whitespace(lhs);
      bool slot = false;
      for (const auto& w : surface) slot = slot || w == "X";
      if (slot) {
        auto parts = split_whitespace(rhs);
        if (parts.size() != 2) throw ParseError("shorthand needs 'attribute value' on the right", line_no);
        auto attr = parse_attribute(parts[0]);
        if (!attr) throw ParseError("unknown attribute '" + parts[0] + "'", line_no);
        for (auto& w : surface) {
          if (w != "X") w = normalize_value(w);
        }
        lex.shorthands_.push_back({std::move(surface), *attr, parts[1]});
      } else {
        lex.values_[normalize_value(lhs)] = normalize_value(rhs);
      }
    }
    return lex;
  }

  // Canonical form of a normalized value; identity when unlisted.
  std::string canonical(std::string_view value) const {
    std::string key = normalize_value(value);
    auto it = values_.find(key);
    return it == values_.end() ? key : it->second;
  }

  bool is_modifier(std::string_view word) const { return modifiers_.contains(std::string(word)); }

  const std::map<std::string, std::string>& entries() const { return values_; }
  const std::set<std::string>& modifiers() const { return modifiers_; }
  const std::vector<Shorthand>& shorthands() const { return shorthands_; }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> modifiers_;
  std::vector<Shorthand> shorthands_;
};

}  // namespace eavfoil::nlu
