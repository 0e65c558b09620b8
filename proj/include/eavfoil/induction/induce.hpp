#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "eavfoil/error.hpp"
#include "eavfoil/induction/clause.hpp"
#include "eavfoil/induction/factbase.hpp"

namespace eavfoil::induction {

struct InduceParams {
  double m = 1.0;
  // Defaults to positive mass / total mass of the fact base.
  std::optional<double> prior;
  double min_improvement = 1e-6;
  std::size_t max_body_len = 3;
  // Positive mass a clause must cover, capped by what is still uncovered.
  // Keeps single-example coincidences (one mug, one unique color) out of
  // the theory.
  double min_support = 2.0;
};

namespace detail {

inline constexpr double kEps = 1e-9;

struct Candidate {
  Literal literal;
  std::vector<bool> cover;  // per example
};

struct Coverage {
  double tp = 0;
  double fp = 0;
};

class Learner {
 public:
  Learner(const FactBase& fb, const InduceParams& params) : fb_(fb), params_(params) {
    const std::size_t n = fb.examples.size();
    pos_.resize(n);
    neg_.resize(n);
    double total_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = fb.examples[i].weight;
      if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("example weight outside [0,1]");
      if (fb.examples[i].tuple.size() != fb.arity()) throw InvalidArgument("example arity mismatch");
      pos_[i] = w;
      neg_[i] = 1.0 - w;
      total_pos += w;
    }
    prior_ = params.prior.value_or(total_pos / static_cast<double>(n));
    // Candidate order fixes tie-breaks: column index, then predicate name.
    for (std::size_t col = 0; col < fb.arity(); ++col) {
      for (const auto& [pred, ext] : fb.value_facts) {
        Literal lit{pred, col};
        if (!type_valid(lit, fb)) continue;
        Candidate c{lit, std::vector<bool>(n)};
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          c.cover[i] = ext.contains(fb.examples[i].tuple[col]);
          any = any || c.cover[i];
        }
        if (any) candidates_.push_back(std::move(c));
      }
    }
  }

  RuleSet run() {
    RuleSet rules;
    rules.target = fb_.target;
    rules.columns = fb_.columns;
    while (remaining_positive() > kEps) {
      const double support = std::min(params_.min_support, remaining_positive());
      std::vector<std::size_t> body = grow(support);
      Coverage cov = coverage(body);
      if (cov.fp > kEps) {
        if (auto consistent = best_consistent(support)) {
          body = *consistent;
          cov = coverage(body);
        }
      }
      const double score = m_estimate(cov.tp, cov.fp, params_.m, prior_);
      const bool accept = cov.tp > kEps && (cov.fp <= kEps || score > prior_ + kEps);
      if (!accept) break;

      Clause clause{fb_.target, fb_.arity(), {}};
      for (std::size_t ci : body) clause.body.push_back(candidates_[ci].literal);
      rules.stats.push_back(clause_stats(clause, fb_, params_.m, prior_));
      rules.clauses.push_back(std::move(clause));
      const std::vector<bool> covered = cover_of(body);
      for (std::size_t i = 0; i < covered.size(); ++i) {
        if (covered[i]) pos_[i] = 0.0;
      }
    }
    return rules;
  }

 private:
  double remaining_positive() const {
    double s = 0;
    for (double p : pos_) s += p;
    return s;
  }

  std::vector<bool> cover_of(const std::vector<std::size_t>& body) const {
    std::vector<bool> cov(pos_.size(), true);
    for (std::size_t ci : body) {
      for (std::size_t i = 0; i < cov.size(); ++i) cov[i] = cov[i] && candidates_[ci].cover[i];
    }
    return cov;
  }

  Coverage coverage(const std::vector<bool>& cov) const {
    Coverage c;
    for (std::size_t i = 0; i < cov.size(); ++i) {
      if (!cov[i]) continue;
      c.tp += pos_[i];
      c.fp += neg_[i];
    }
    return c;
  }

  Coverage coverage(const std::vector<std::size_t>& body) const { return coverage(cover_of(body)); }

  double score(const Coverage& c) const { return m_estimate(c.tp, c.fp, params_.m, prior_); }

  // Greedy specialization from the empty body.
  std::vector<std::size_t> grow(double support) const {
    std::vector<std::size_t> body;
    std::vector<bool> cov(pos_.size(), true);
    while (true) {
      const Coverage current = coverage(cov);
      if (current.fp <= kEps || body.size() >= params_.max_body_len) break;
      const double current_score = score(current);
      std::optional<std::size_t> best;
      double best_score = 0;
      std::vector<bool> best_cov;
      for (std::size_t ci = 0; ci < candidates_.size(); ++ci) {
        if (std::find(body.begin(), body.end(), ci) != body.end()) continue;
        std::vector<bool> next(cov.size());
        for (std::size_t i = 0; i < cov.size(); ++i) next[i] = cov[i] && candidates_[ci].cover[i];
        const Coverage c = coverage(next);
        if (c.tp <= kEps || c.tp < support - kEps) continue;
        const double s = score(c);
        if (!best || s > best_score) {
          best = ci;
          best_score = s;
          best_cov = std::move(next);
        }
      }
      if (!best || best_score - current_score < params_.min_improvement) break;
      body.push_back(*best);
      cov = std::move(best_cov);
    }
    return body;
  }

  // Fallback when greedy growth ends on a clause that still covers
  // negatives: the best-scoring clause within the length bound that covers
  // no negative mass and enough positive mass. Shorter clauses and earlier
  // candidates win ties.
  std::optional<std::vector<std::size_t>> best_consistent(double support) const {
    std::vector<std::size_t> useful;
    for (std::size_t ci = 0; ci < candidates_.size(); ++ci) {
      std::vector<std::size_t> single{ci};
      if (coverage(single).tp >= support - kEps && coverage(single).tp > kEps) useful.push_back(ci);
    }
    std::optional<std::vector<std::size_t>> best;
    double best_score = 0;
    std::vector<std::size_t> body;
    std::vector<bool> used_column(fb_.arity(), false);
    auto visit = [&](auto&& self, std::size_t start, std::vector<bool> cov) -> void {
      if (!body.empty()) {
        const Coverage c = coverage(cov);
        if (c.tp <= kEps || c.tp < support - kEps) return;
        if (c.fp <= kEps) {
          const double s = score(c);
          if (!best || s > best_score + kEps || (s > best_score - kEps && body.size() < best->size())) {
            best = body;
            best_score = s;
          }
          return;  // extending cannot lower FP further
        }
      }
      if (body.size() >= params_.max_body_len) return;
      for (std::size_t k = start; k < useful.size(); ++k) {
        const Candidate& cand = candidates_[useful[k]];
        if (used_column[cand.literal.column]) continue;
        std::vector<bool> next(cov.size());
        for (std::size_t i = 0; i < cov.size(); ++i) next[i] = cov[i] && cand.cover[i];
        used_column[cand.literal.column] = true;
        body.push_back(useful[k]);
        self(self, k + 1, std::move(next));
        body.pop_back();
        used_column[cand.literal.column] = false;
      }
    };
    visit(visit, 0, std::vector<bool>(pos_.size(), true));
    return best;
  }

  const FactBase& fb_;
  InduceParams params_;
  double prior_ = 0;
  std::vector<double> pos_;  // uncovered positive mass per example
  std::vector<double> neg_;  // negative mass per example
  std::vector<Candidate> candidates_;
};

}  // namespace detail

// Sequential covering with greedy, m-estimate guided clause growth.
// Each round grows one clause from the empty body, accepts it when it
// covers no negative mass or beats the prior, then retires the positive
// mass it covers. Stops when no positive mass is left or a round's clause
// is rejected.
inline RuleSet induce(const FactBase& fb, const InduceParams& params = {}) {
  if (fb.examples.empty()) throw InvalidArgument("fact base has no examples");
  if (params.m < 0) throw InvalidArgument("m must be non-negative");
  if (params.prior && !(*params.prior >= 0 && *params.prior <= 1)) {
    throw InvalidArgument("prior must lie in [0,1]");
  }
  return detail::Learner(fb, params).run();
}

}  // namespace eavfoil::induction
