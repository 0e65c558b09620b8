#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/induction/clause.hpp"
#include "eavfoil/induction/factbase.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::induction {

// 1.0 / 0.0 for the crisp cases, shortest round-trip digits otherwise.
inline std::string format_weight(double w) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

// probFOIL-style problem text:
//   % target: name/arity
//   % types: col_1=attr col_2=attr ...
//   % modes: input-only
//   W::name(sym, ...).      one line per example, in example order
//   value(sym).             one line per named symbol, grouped by column
inline std::string render_problem(const FactBase& fb, const std::string& target_name) {
  std::string out = "% target: " + render_atom(target_name) + "/" + std::to_string(fb.arity()) + "\n";
  out += "% types:";
  for (std::size_t i = 0; i < fb.columns.size(); ++i) {
    out += " col_" + std::to_string(i + 1) + "=" + std::string(to_string(fb.columns[i]));
  }
  out += "\n% modes: input-only\n";
  for (const Example& e : fb.examples) {
    out += format_weight(e.weight) + "::" + render_atom(target_name);
    if (!e.tuple.empty()) {
      out += "(";
      for (std::size_t i = 0; i < e.tuple.size(); ++i) {
        if (i) out += ", ";
        out += fb.symbols[e.tuple[i]].id;
      }
      out += ")";
    }
    out += ".\n";
  }
  for (AttributeName col : fb.columns) {
    for (const ValueSymbol& s : fb.symbols) {
      if (s.attribute == col && !s.anonymous()) out += render_atom(*s.value) + "(" + s.id + ").\n";
    }
  }
  return out;
}

inline std::string render_problem(const FactBase& fb) { return render_problem(fb, fb.target); }

namespace detail {

class TermReader {
 public:
  TermReader(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!eat(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string atom() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      std::string out;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '\'') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out.push_back(text_[pos_++]);
      }
      if (pos_ >= text_.size()) fail("unterminated quoted atom");
      ++pos_;
      return out;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected an atom");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    double v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected a weight");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  // name or name(a, b, ...)
  std::pair<std::string, std::vector<std::string>> term() {
    std::pair<std::string, std::vector<std::string>> t;
    t.first = atom();
    if (eat("(")) {
      do {
        t.second.push_back(atom());
      } while (eat(","));
      expect(")");
    }
    return t;
  }

  void finish() {
    expect(".");
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, pos_ + 1); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Inverse of render_problem. Symbol order follows first appearance in the
// example lines, matching translate().
inline FactBase parse_problem(std::string_view text) {
  FactBase fb;
  std::optional<std::size_t> arity;
  std::map<std::string, std::size_t> symbol_index;
  struct ValueLine {
    std::string predicate, symbol;
    std::size_t line;
  };
  std::vector<ValueLine> value_lines;

  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string line = nlu::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '%') {
      std::string body = nlu::trim(std::string_view(line).substr(1));
      if (body.rfind("target:", 0) == 0) {
        const std::string decl = body.substr(7);
        detail::TermReader r(decl, line_no);
        fb.target = r.atom();
        r.expect("/");
        arity = static_cast<std::size_t>(r.number());
      } else if (body.rfind("types:", 0) == 0) {
        for (const std::string& field : nlu::split_whitespace(body.substr(6))) {
          auto eq = field.find('=');
          auto attr = eq == std::string::npos ? std::nullopt : parse_attribute(field.substr(eq + 1));
          if (!attr || field.rfind("col_", 0) != 0) throw ParseError("bad type '" + field + "'", line_no);
          fb.columns.push_back(*attr);
        }
      }
      continue;
    }
    detail::TermReader r(line, line_no);
    if (line.find("::") != std::string::npos) {
      Example ex;
      ex.weight = r.number();
      if (!(ex.weight >= 0 && ex.weight <= 1)) r.fail("weight outside [0,1]");
      r.expect("::");
      auto [name, args] = r.term();
      r.finish();
      if (!arity) throw ParseError("example before '% target:' header", line_no);
      if (name != fb.target) throw ParseError("example predicate '" + name + "' is not the target", line_no);
      if (args.size() != *arity || args.size() != fb.columns.size()) {
        throw ParseError("example arity does not match target and types", line_no);
      }
      for (std::size_t col = 0; col < args.size(); ++col) {
        auto it = symbol_index.find(args[col]);
        if (it == symbol_index.end()) {
          fb.symbols.push_back({args[col], fb.columns[col], std::nullopt});
          it = symbol_index.emplace(args[col], fb.symbols.size() - 1).first;
        } else if (fb.symbols[it->second].attribute != fb.columns[col]) {
          throw ParseError("symbol '" + args[col] + "' used under two types", line_no);
        }
        ex.tuple.push_back(it->second);
      }
      fb.examples.push_back(std::move(ex));
    } else {
      auto [name, args] = r.term();
      r.finish();
      if (args.size() != 1) throw ParseError("value fact must have one argument", line_no);
      value_lines.push_back({name, args[0], line_no});
    }
  }
  if (!arity) throw ParseError("missing '% target:' header");
  if (*arity != fb.columns.size()) throw ParseError("'% types:' does not match target arity");
  for (const ValueLine& v : value_lines) {
    auto it = symbol_index.find(v.symbol);
    if (it == symbol_index.end()) throw ParseError("value fact on unknown symbol '" + v.symbol + "'", v.line);
    ValueSymbol& s = fb.symbols[it->second];
    if (s.value && *s.value != v.predicate) {
      throw ParseError("symbol '" + v.symbol + "' carries two values", v.line);
    }
    s.value = v.predicate;
    fb.value_facts[v.predicate].insert(it->second);
  }
  return fb;
}

}  // namespace eavfoil::induction
