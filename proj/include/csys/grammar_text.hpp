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
// Internal knobs for the grammar text parser.  Rule files reuse the same
// production syntax but classify symbols against a declared event alphabet
// and allow postfix '*' repetition, which is desugared into fresh
// nonterminals (X* -> eps | X X*) before compilation.

#ifndef CSYS_GRAMMAR_TEXT_HPP_
#define CSYS_GRAMMAR_TEXT_HPP_

#include <set>
#include <string>

#include "csys/grammar.hpp"

namespace csys::internal {

struct GrammarTextOptions {
  // Permit postfix '*' on right-hand-side symbols.
  bool allow_star = false;
  // Names forced to be plain terminals regardless of spelling (used for
  // event-class names such as `D` inside rule grammars).
  std::set<std::string> terminal_names;
  // When set, any terminal not listed in `terminal_names` is rejected.
  bool restrict_terminals = false;
};

struct ParsedGrammarText {
  Grammar grammar;
};

ParsedGrammarText parse_grammar_text(const std::string& source,
                                     const GrammarTextOptions& opts);

}  // namespace csys::internal

#endif  // CSYS_GRAMMAR_TEXT_HPP_
