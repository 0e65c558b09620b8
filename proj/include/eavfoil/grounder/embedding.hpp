#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/kb/attribute.hpp"
#include "eavfoil/kb/snapshot.hpp"
#include "eavfoil/nlu/text.hpp"

namespace eavfoil::grounder {

class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // `token f1 ... fD` per line; an optional leading `COUNT DIM` header line
  // is skipped. Duplicate tokens keep the last vector.
  static EmbeddingTable parse(std::string_view text) {
    EmbeddingTable table;
    std::size_t line_no = 0, pos = 0;
    bool first = true;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      auto fields = nlu::split_whitespace(line);
      if (fields.empty()) continue;
      if (first) {
        first = false;
        if (fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) continue;
      }
      if (fields.size() < 2) throw ParseError("token without vector", line_no);
      std::vector<double> vec;
      vec.reserve(fields.size() - 1);
      for (std::size_t i = 1; i < fields.size(); ++i) {
        double x = 0;
        const std::string& f = fields[i];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
          throw ParseError("bad number '" + f + "'", line_no);
        }
        vec.push_back(x);
      }
      if (table.dimension_ == 0) {
        table.dimension_ = vec.size();
      } else if (vec.size() != table.dimension_) {
        throw ParseError("dimension mismatch: expected " + std::to_string(table.dimension_) +
                             " values, got " + std::to_string(vec.size()),
                         line_no);
      }
      table.vectors_[normalize_value(fields[0])] = std::move(vec);
    }
    return table;
  }

  static EmbeddingTable load(const std::string& path) { return parse(eavfoil::detail::read_file(path)); }

  void insert(std::string token, std::vector<double> vec) {
    if (vec.empty()) throw InvalidArgument("empty vector");
    if (dimension_ == 0) dimension_ = vec.size();
    if (vec.size() != dimension_) throw InvalidArgument("dimension mismatch");
    vectors_[normalize_value(token)] = std::move(vec);
  }

  const std::vector<double>* find(std::string_view token) const {
    auto it = vectors_.find(std::string(token));
    return it == vectors_.end() ? nullptr : &it->second;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }

 private:
  static bool is_integer(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
  }

  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

inline EmbeddingTable load_embeddings(const std::string& path) { return EmbeddingTable::load(path); }

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Cosine distance 1 - cos in [0,2] when both tokens have non-zero vectors,
// otherwise twice the length-normalized edit distance.
inline double token_distance(std::string_view a, std::string_view b, const EmbeddingTable& table) {
  if (a == b) return 0.0;
  const auto* va = table.find(a);
  const auto* vb = table.find(b);
  if (va && vb) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < va->size(); ++i) {
      dot += (*va)[i] * (*vb)[i];
      na += (*va)[i] * (*va)[i];
      nb += (*vb)[i] * (*vb)[i];
    }
    if (na > 0 && nb > 0) {
      return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
    }
  }
  const double longest = static_cast<double>(std::max(a.size(), b.size()));
  return 2.0 * static_cast<double>(levenshtein(a, b)) / longest;
}

}  // namespace eavfoil::grounder
