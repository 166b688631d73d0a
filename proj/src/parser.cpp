// Copyright 2026 The Csys Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csys/parser.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace csys {

MatchResult default_terminal_matcher(const Symbol& symbol,
                                     const Token& token) {
  if (symbol.kind == SymbolKind::kParamTerminal) {
    return MatchResult{true, token.text};
  }
  return MatchResult{symbol.name == token.text, std::nullopt};
}

std::vector<Token> tokenize_chars(const std::string& text) {
  std::vector<Token> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.push_back(Token{std::string(1, text[i]), SourceSpan{i, i + 1}, 0});
  }
  return out;
}

namespace {

struct Item {
  int prod = 0;
  int dot = 0;
  int origin = 0;
};

class EarleyRun {
 public:
  EarleyRun(const Grammar& g, const std::vector<Token>& input,
            const ParseOptions& options)
      : g_(g),
        input_(input),
        options_(options),
        matcher_(options.matcher ? options.matcher : default_terminal_matcher),
        n_(input.size()) {
    for (const LabeledProduction& p : g_.productions()) {
      nt_id(p.lhs);
    }
    prods_by_lhs_.resize(nt_names_.size());
    for (std::size_t i = 0; i < g_.productions().size(); ++i) {
      prods_by_lhs_[nt_id(g_.productions()[i].lhs)].push_back(
          static_cast<int>(i));
    }
    for (const LabeledProduction& p : g_.productions()) {
      max_dot_ = std::max(max_dot_, p.rhs.size() + 1);
    }
    chart_.resize(n_ + 1);
    seen_.resize(n_ + 1);
    completed_empty_.resize(n_ + 1);
  }

  ParseRun run() {
    recognize();
    ParseRun out;
    out.traces = extract();
    out.progress = 0;
    for (std::size_t pos = 0; pos <= n_; ++pos) {
      if (!chart_[pos].empty()) out.progress = pos;
    }
    return out;
  }

 private:
  int nt_id(const std::string& name) {
    auto [it, inserted] =
        nt_ids_.emplace(name, static_cast<int>(nt_names_.size()));
    if (inserted) nt_names_.push_back(name);
    return it->second;
  }

  std::uint64_t span_key(int nt, int i, int j) const {
    const std::uint64_t base = static_cast<std::uint64_t>(n_) + 2;
    return (static_cast<std::uint64_t>(nt) * base + i) * base + j;
  }

  void add(int pos, Item item) {
    std::uint64_t key =
        (static_cast<std::uint64_t>(item.prod) * max_dot_ + item.dot) *
            (static_cast<std::uint64_t>(n_) + 2) +
        item.origin;
    if (seen_[pos].insert(key).second) chart_[pos].push_back(item);
  }

  void recognize() {
    const auto& prods = g_.productions();
    for (int p : prods_by_lhs_[nt_id(g_.start())]) add(0, Item{p, 0, 0});

    for (int pos = 0; pos <= static_cast<int>(n_); ++pos) {
      // The chart at `pos` can grow while we scan it (predictions and
      // empty-span completions land in the same set).
      for (std::size_t idx = 0; idx < chart_[pos].size(); ++idx) {
        Item item = chart_[pos][idx];
        const LabeledProduction& prod = prods[item.prod];
        if (item.dot < static_cast<int>(prod.rhs.size())) {
          const Symbol& next = prod.rhs[item.dot];
          if (next.kind == SymbolKind::kNonterminal) {
            int nt = nt_id(next.name);
            for (int p : prods_by_lhs_[nt]) add(pos, Item{p, 0, pos});
            // An empty-span completion of `nt` may already have happened at
            // this position; advance over it now, since that completion will
            // not see this item.
            if (completed_empty_[pos].count(nt) != 0) {
              add(pos, Item{item.prod, item.dot + 1, item.origin});
            }
          } else if (pos < static_cast<int>(n_) &&
                     matcher_(next, input_[pos]).matched) {
            add(pos + 1, Item{item.prod, item.dot + 1, item.origin});
          }
        } else {
          int lhs = nt_id(prod.lhs);
          completed_[span_key(lhs, item.origin, pos)].push_back(item.prod);
          auto& ends = ends_[(static_cast<std::uint64_t>(lhs) *
                              (static_cast<std::uint64_t>(n_) + 2)) +
                             item.origin];
          if (std::find(ends.begin(), ends.end(), pos) == ends.end()) {
            ends.push_back(pos);
          }
          if (item.origin == pos) completed_empty_[pos].insert(lhs);
          for (std::size_t k = 0; k < chart_[item.origin].size(); ++k) {
            Item waiting = chart_[item.origin][k];
            const LabeledProduction& wp = prods[waiting.prod];
            if (waiting.dot < static_cast<int>(wp.rhs.size()) &&
                wp.rhs[waiting.dot].kind == SymbolKind::kNonterminal &&
                nt_ids_.at(wp.rhs[waiting.dot].name) == lhs) {
              add(pos, Item{waiting.prod, waiting.dot + 1, waiting.origin});
            }
          }
        }
      }
    }

    for (auto& [key, prods_here] : completed_) {
      std::sort(prods_here.begin(), prods_here.end());
      prods_here.erase(std::unique(prods_here.begin(), prods_here.end()),
                       prods_here.end());
    }
    for (auto& [key, ends] : ends_) std::sort(ends.begin(), ends.end());
  }

  void charge() {
    if (++work_ > options_.work_budget) {
      throw BudgetError(BudgetError::Kind::kTraces,
                        "derivation extraction exceeded its work budget");
    }
  }

  void emit_trace() {
    if (results_.size() >= options_.max_traces) {
      throw BudgetError(
          BudgetError::Kind::kTraces,
          "input has more than " + std::to_string(options_.max_traces) +
              " leftmost derivations");
    }
    results_.push_back(DerivationTrace{events_});
  }

  std::optional<SourceSpan> yield_span(int i, int j) const {
    if (i < j) return SourceSpan{input_[i].span.start, input_[j - 1].span.end};
    // Empty yield: a collapsed span at the position where it occurred.
    if (static_cast<std::size_t>(i) < n_) {
      return SourceSpan{input_[i].span.start, input_[i].span.start};
    }
    if (n_ > 0) return SourceSpan{input_[n_ - 1].span.end, input_[n_ - 1].span.end};
    return std::nullopt;
  }

  // Enumerates derivations of nonterminal `nt` over input span [i, j),
  // invoking `cont` once per derivation with the events appended.
  void expand_nt(int nt, int i, int j, const std::function<void()>& cont) {
    charge();
    auto completed_it = completed_.find(span_key(nt, i, j));
    if (completed_it == completed_.end()) return;
    std::uint64_t path_key = span_key(nt, i, j);
    if (!path_.insert(path_key).second) {
      throw BudgetError(BudgetError::Kind::kTraces,
                        "cyclic derivations give this input unboundedly many "
                        "leftmost derivations");
    }
    // Once `cont` runs this instance's subtree is complete, so it is no
    // longer an ancestor of the expansion point; without releasing the key a
    // later sibling with the same span (common with nullable nonterminals)
    // would be mistaken for a cycle.
    std::function<void()> after = [&] {
      path_.erase(path_key);
      cont();
      path_.insert(path_key);
    };
    for (int prod_index : completed_it->second) {
      const LabeledProduction& prod = g_.productions()[prod_index];
      events_.push_back(
          ProductionEvent{prod.label, std::nullopt, yield_span(i, j),
                          std::nullopt});
      expand_seq(prod, 0, i, j, after);
      events_.pop_back();
    }
    path_.erase(path_key);
  }

  // Matches prod.rhs[k..] against input span [p, j).
  void expand_seq(const LabeledProduction& prod, std::size_t k, int p, int j,
                  const std::function<void()>& cont) {
    charge();
    if (k == prod.rhs.size()) {
      if (p == j) cont();
      return;
    }
    const Symbol& sym = prod.rhs[k];
    if (sym.kind == SymbolKind::kNonterminal) {
      auto ends_it = ends_.find((static_cast<std::uint64_t>(nt_ids_.at(
                                     sym.name)) *
                                 (static_cast<std::uint64_t>(n_) + 2)) +
                                p);
      if (ends_it == ends_.end()) return;
      for (int q : ends_it->second) {
        if (q > j) break;
        expand_nt(nt_ids_.at(sym.name), p, q,
                  [&] { expand_seq(prod, k + 1, q, j, cont); });
      }
      return;
    }
    if (p >= j) return;
    MatchResult m = matcher_(sym, input_[p]);
    if (!m.matched) return;
    if (sym.kind == SymbolKind::kParamTerminal) {
      events_.push_back(ProductionEvent{sym.name, m.parameter.value_or(""),
                                        input_[p].span, std::nullopt});
      expand_seq(prod, k + 1, p + 1, j, cont);
      events_.pop_back();
    } else {
      expand_seq(prod, k + 1, p + 1, j, cont);
    }
  }

  std::vector<DerivationTrace> extract() {
    expand_nt(nt_ids_.at(g_.start()), 0, static_cast<int>(n_),
              [&] { emit_trace(); });
    auto trace_less = [](const DerivationTrace& a, const DerivationTrace& b) {
      return std::lexicographical_compare(
          a.events.begin(), a.events.end(), b.events.begin(), b.events.end(),
          [](const ProductionEvent& x, const ProductionEvent& y) {
            if (x.label != y.label) return x.label < y.label;
            return x.parameter < y.parameter;
          });
    };
    std::sort(results_.begin(), results_.end(), trace_less);
    return std::move(results_);
  }

  const Grammar& g_;
  const std::vector<Token>& input_;
  const ParseOptions& options_;
  TerminalMatcher matcher_;
  std::size_t n_;

  std::map<std::string, int> nt_ids_;
  std::vector<std::string> nt_names_;
  std::vector<std::vector<int>> prods_by_lhs_;
  std::size_t max_dot_ = 1;

  std::vector<std::vector<Item>> chart_;
  std::vector<std::unordered_set<std::uint64_t>> seen_;
  std::vector<std::unordered_set<int>> completed_empty_;
  std::unordered_map<std::uint64_t, std::vector<int>> completed_;
  std::unordered_map<std::uint64_t, std::vector<int>> ends_;

  std::vector<ProductionEvent> events_;
  std::vector<DerivationTrace> results_;
  std::unordered_set<std::uint64_t> path_;
  std::size_t work_ = 0;
};

}  // namespace

std::vector<DerivationTrace> parse_traces(const Grammar& g,
                                          const std::vector<Token>& input,
                                          const ParseOptions& options) {
  return EarleyRun(g, input, options).run().traces;
}

ParseRun parse_traces_diagnosed(const Grammar& g,
                                const std::vector<Token>& input,
                                const ParseOptions& options) {
  return EarleyRun(g, input, options).run();
}

std::vector<DerivationTrace> parse_traces(const Grammar& g,
                                          const std::vector<Token>& input,
                                          std::size_t max_traces) {
  ParseOptions options;
  options.max_traces = max_traces;
  return parse_traces(g, input, options);
}

}  // namespace csys
