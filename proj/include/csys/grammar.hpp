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
//
// Context-free grammars with labeled productions, and the leftmost
// derivations they generate.  A derivation is observed as a trace: the
// sequence of production labels applied, interleaved with the values bound
// by parameterized terminals as the derivation frontier passes them.

#ifndef CSYS_GRAMMAR_HPP_
#define CSYS_GRAMMAR_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csys/errors.hpp"

namespace csys {

enum class SymbolKind {
  kNonterminal,
  kTerminal,
  // A terminal that binds a value when matched; the binding is reported in
  // traces as an event of its own (e.g. the qname consumed by production
  // family 2a shows up as `2k(Package)`).
  kParamTerminal,
};

struct Symbol {
  SymbolKind kind = SymbolKind::kTerminal;
  std::string name;
  // Formal parameter name; present iff kind == kParamTerminal.
  std::optional<std::string> parameter;

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.kind == b.kind && a.name == b.name;
  }
};

struct LabeledProduction {
  std::string label;      // unique within the grammar
  std::string lhs;        // nonterminal name
  std::vector<Symbol> rhs;  // empty vector encodes an epsilon body
};

// One step of an observed leftmost derivation: either a production
// application (label = production label) or a parameterized-terminal match
// (label = terminal name, parameter = bound value).
struct ProductionEvent {
  std::string label;
  std::optional<std::string> parameter;
  std::optional<SourceSpan> span;
  std::optional<std::string> element_id;

  friend bool operator==(const ProductionEvent& a, const ProductionEvent& b) {
    return a.label == b.label && a.parameter == b.parameter;
  }
};

struct DerivationTrace {
  std::vector<ProductionEvent> events;
};

class Grammar {
 public:
  Grammar(std::vector<LabeledProduction> productions, std::string start);

  const std::vector<LabeledProduction>& productions() const {
    return productions_;
  }
  const std::string& start() const { return start_; }

  // nullptr when no production carries `label`.
  const LabeledProduction* find(const std::string& label) const;

  bool is_nonterminal(const std::string& name) const {
    return nonterminals_.count(name) != 0;
  }
  const std::set<std::string>& nonterminals() const { return nonterminals_; }
  const std::set<std::string>& terminals() const { return terminals_; }
  const std::set<std::string>& param_terminals() const {
    return param_terminals_;
  }

  // All observable event labels: production labels plus parameterized
  // terminal names.
  std::set<std::string> event_labels() const;

  // True when every body is a (possibly empty) run of terminals followed by
  // at most one trailing nonterminal.
  bool is_right_linear() const;

 private:
  std::vector<LabeledProduction> productions_;
  std::string start_;
  std::map<std::string, std::size_t> by_label_;
  std::set<std::string> nonterminals_;
  std::set<std::string> terminals_;
  std::set<std::string> param_terminals_;
};

// Compiles the textual grammar format:
//
//   # comment
//   start: Expr            (optional; defaults to the first production's lhs)
//   p1: Expr -> Expr '+' Term
//   p2: Expr -> Term
//   t1: Term -> num
//   e:  Opt  -> eps
//
// One production per line.  `->`, the arrow character, or `::=` separate the
// sides; `eps` (or the epsilon character) is the empty body.  Nonterminals
// start with an uppercase letter; quoted tokens, lowercase-initial and
// digit-initial names are terminals.  A parameterized terminal is declared
// inline as name(param), e.g. 2k(xmiName), and may be referenced bare
// afterwards.  Throws SyntaxError (duplicate label, undeclared symbol,
// missing start, ...).
Grammar compile_grammar(const std::string& source);

// A sentential form: symbols plus, for parameterized terminals that a trace
// has already bound, the bound values.
struct SententialForm {
  std::vector<Symbol> symbols;
  std::vector<std::optional<std::string>> bindings;  // parallel to symbols

  bool complete() const;
  // Renders terminals separated by spaces; nonterminals are bracketed.
  std::string to_string() const;
};

// Replays `events` as a leftmost derivation from the start symbol and
// returns the resulting sentential form.  Production events must rewrite the
// leftmost nonterminal; a parameterized terminal sitting before the leftmost
// nonterminal must be bound (in frontier order) before the next production
// applies.  Throws InvalidArgument naming the first offending event index.
SententialForm leftmost_derive(const Grammar& g,
                               const std::vector<ProductionEvent>& events);

}  // namespace csys

#endif  // CSYS_GRAMMAR_HPP_
