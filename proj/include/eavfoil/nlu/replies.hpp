#pragma once

#include <map>
#include <string>
#include <string_view>

#include "eavfoil/error.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::nlu {

// Robot reply templates, one `key → template` per line. Keys with a
// "/suffix" fall back to the bare key when the specific one is missing.
// Templates use {name} slots; unknown slots render empty and repeated
// blanks collapse.
class ReplyBook {
 public:
  static ReplyBook parse(std::string_view text) {
    ReplyBook book;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line = trim(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      std::size_t arrow = line.find("→");
      std::size_t len = std::string_view("→").size();
      if (arrow == std::string::npos) {
        arrow = line.find("->");
        len = 2;
      }
      if (arrow == std::string::npos) throw ParseError("expected 'key → template'", line_no);
      std::string key = trim(line.substr(0, arrow));
      if (key.empty()) throw ParseError("empty reply key", line_no);
      book.templates_[key] = trim(line.substr(arrow + len));
    }
    return book;
  }

  static ReplyBook load(const std::string& path) { return parse(eavfoil::detail::read_file(path)); }

  bool has(const std::string& key) const { return lookup(key) != nullptr; }

  std::string render(const std::string& key, const std::map<std::string, std::string>& slots) const {
    const std::string* tpl = lookup(key);
    if (!tpl) throw Error("no reply template for '" + key + "'");
    std::string out;
    for (std::size_t i = 0; i < tpl->size(); ++i) {
      char c = (*tpl)[i];
      if (c == '{') {
        std::size_t close = tpl->find('}', i);
        if (close != std::string::npos) {
          auto it = slots.find(tpl->substr(i + 1, close - i - 1));
          if (it != slots.end()) out += it->second;
          i = close;
          continue;
        }
      }
      out.push_back(c);
    }
    return join(split_whitespace(out), " ");
  }

 private:
  const std::string* lookup(const std::string& key) const {
    if (auto it = templates_.find(key); it != templates_.end()) return &it->second;
    if (auto slash = key.find('/'); slash != std::string::npos) {
      if (auto it = templates_.find(key.substr(0, slash)); it != templates_.end()) return &it->second;
    }
    return nullptr;
  }

  std::map<std::string, std::string> templates_;
};

}  // namespace eavfoil::nlu
