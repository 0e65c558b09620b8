#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace eavfoil::nlu {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Lowercased whitespace tokens with surrounding punctuation removed.
// Inner apostrophes and hyphens survive ("mary's", "t-shirt").
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (std::string& raw : split_whitespace(text)) {
    std::size_t b = 0, e = raw.size();
    auto is_edge_punct = [](char c) {
      return std::ispunct(static_cast<unsigned char>(c)) && c != '_';
    };
    while (b < e && is_edge_punct(raw[b])) ++b;
    while (e > b && is_edge_punct(raw[e - 1])) --e;
    if (b == e) continue;
    std::string tok;
    for (std::size_t i = b; i < e; ++i) {
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    }
    out.push_back(std::move(tok));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep,
                        std::size_t begin = 0, std::size_t end = std::string::npos) {
  std::string out;
  end = std::min(end, parts.size());
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace eavfoil::nlu
