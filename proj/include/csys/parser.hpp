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
// Chart parsing (Earley-style) over token sequences, and extraction of
// every leftmost derivation of the input as a trace of labeled events.

#ifndef CSYS_PARSER_HPP_
#define CSYS_PARSER_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csys/grammar.hpp"

namespace csys {

// A generic input token.  `klass` is an opaque tag a front end may use to
// drive terminal matching (the default matcher ignores it).
struct Token {
  std::string text;
  SourceSpan span;
  int klass = 0;
};

struct MatchResult {
  bool matched = false;
  // Bound value when the matched symbol is a parameterized terminal.
  std::optional<std::string> parameter;
};

// Decides whether a terminal symbol matches a token.
using TerminalMatcher = std::function<MatchResult(const Symbol&, const Token&)>;

// Plain terminals match tokens by exact text; parameterized terminals match
// any token and bind its text.
MatchResult default_terminal_matcher(const Symbol& symbol, const Token& token);

struct ParseOptions {
  // Upper bound on the number of distinct leftmost derivations returned.
  // More than this many (including infinitely many, from cyclic
  // derivations) raises BudgetError(kTraces).
  std::size_t max_traces = 64;
  // Cap on extraction work, to bound pathological ambiguity.
  std::size_t work_budget = 5'000'000;
  TerminalMatcher matcher;  // default_terminal_matcher when empty
};

// Returns every leftmost derivation of `input`, one trace per derivation,
// sorted lexicographically by event sequence.  The result is empty iff the
// input is not in L(g).  Traces interleave production labels with
// parameterized-terminal bindings in frontier order; parameterized events
// carry the matched token's span, production events the span of their
// yield.
std::vector<DerivationTrace> parse_traces(const Grammar& g,
                                          const std::vector<Token>& input,
                                          const ParseOptions& options = {});

std::vector<DerivationTrace> parse_traces(const Grammar& g,
                                          const std::vector<Token>& input,
                                          std::size_t max_traces);

struct ParseRun {
  std::vector<DerivationTrace> traces;
  // Length of the longest input prefix the recognizer could extend into
  // some viable derivation.  When `traces` is empty, input[progress] (or
  // the end of input, if progress equals the input size) is the first
  // point with no viable continuation.
  std::size_t progress = 0;
};

// As parse_traces, but also reports recognizer progress for error messages.
ParseRun parse_traces_diagnosed(const Grammar& g,
                                const std::vector<Token>& input,
                                const ParseOptions& options = {});

// Convenience for single-character-token languages: each byte of `text`
// becomes one token spanning its own offset.
std::vector<Token> tokenize_chars(const std::string& text);

}  // namespace csys

#endif  // CSYS_PARSER_HPP_
