#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::nlu {

// Half-open token range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return begin == end; }
  friend bool operator==(const Span&, const Span&) = default;
};

// Utterance template over tokens. Element syntax:
//   word          literal, "has/have" for alternatives
//   *             any run of tokens, possibly empty
//   {name}        exactly one token
//   {name?}       zero or one token
//   {name+}       one or more tokens
//   {name=a/b}    one token out of a closed set
// A template must cover the whole utterance.
class Template {
 public:
  enum class Kind { literal, wildcard, one, optional, some, choice };

  struct Element {
    Kind kind = Kind::literal;
    std::string name;                  // captures only
    std::vector<std::string> options;  // literal and choice
  };

  Template() = default;

  static Template parse(std::string_view source) {
    Template t;
    t.source_ = trim(source);
    for (const std::string& raw : split_whitespace(source)) {
      Element el;
      if (raw == "*") {
        el.kind = Kind::wildcard;
      } else if (raw.size() >= 3 && raw.front() == '{' && raw.back() == '}') {
        std::string inner = raw.substr(1, raw.size() - 2);
        if (auto eq = inner.find('='); eq != std::string::npos) {
          el.kind = Kind::choice;
          el.options = split_options(inner.substr(eq + 1));
          inner = inner.substr(0, eq);
          if (el.options.empty()) throw ParseError("empty choice in '" + raw + "'");
        } else if (inner.back() == '?') {
          el.kind = Kind::optional;
          inner.pop_back();
        } else if (inner.back() == '+') {
          el.kind = Kind::some;
          inner.pop_back();
        } else {
          el.kind = Kind::one;
        }
        if (inner.empty()) throw ParseError("capture without a name in '" + raw + "'");
        el.name = inner;
      } else if (raw.find_first_of("{}") != std::string::npos) {
        throw ParseError("malformed template element '" + raw + "'");
      } else {
        el.kind = Kind::literal;
        el.options = split_options(raw);
      }
      t.elements_.push_back(std::move(el));
    }
    if (t.elements_.empty()) throw ParseError("empty template");
    return t;
  }

  struct Match {
    std::vector<Span> element_spans;     // one per template element
    std::map<std::string, Span> captures;
  };

  std::optional<Match> match(const std::vector<std::string>& tokens) const {
    std::vector<Span> spans(elements_.size());
    if (!match_from(0, 0, tokens, spans)) return std::nullopt;
    Match m;
    m.element_spans = spans;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (!elements_[i].name.empty()) m.captures[elements_[i].name] = spans[i];
    }
    return m;
  }

  bool has_capture(std::string_view name) const {
    for (const auto& el : elements_) {
      if (el.name == name) return true;
    }
    return false;
  }

  const std::vector<Element>& elements() const { return elements_; }
  const std::string& source() const { return source_; }

 private:
  static std::vector<std::string> split_options(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == '/') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  static bool one_of(const std::vector<std::string>& options, const std::string& tok) {
    for (const auto& o : options) {
      if (o == tok) return true;
    }
    return false;
  }

  bool match_from(std::size_t ei, std::size_t ti, const std::vector<std::string>& tokens,
                  std::vector<Span>& spans) const {
    if (ei == elements_.size()) return ti == tokens.size();
    const Element& el = elements_[ei];
    const std::size_t left = tokens.size() - ti;
    auto attempt = [&](std::size_t n) {
      spans[ei] = {ti, ti + n};
      return match_from(ei + 1, ti + n, tokens, spans);
    };
    switch (el.kind) {
      case Kind::literal:
      case Kind::choice:
        return left >= 1 && one_of(el.options, tokens[ti]) && attempt(1);
      case Kind::one:
        return left >= 1 && attempt(1);
      case Kind::optional:
        return (left >= 1 && attempt(1)) || attempt(0);
      case Kind::wildcard:
        for (std::size_t n = 0; n <= left; ++n) {
          if (attempt(n)) return true;
        }
        return false;
      case Kind::some:
        for (std::size_t n = 1; n <= left; ++n) {
          if (attempt(n)) return true;
        }
        return false;
    }
    return false;
  }

  std::string source_;
  std::vector<Element> elements_;
};

}  // namespace eavfoil::nlu
