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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "csys/errors.hpp"
#include "csys/grammar.hpp"
#include "csys/parser.hpp"

#include "testing.hpp"

using namespace csys;
using csys::testing::labels_of;

namespace {

const char kDemoGrammar[] = R"(
start: S
p1: S -> "a" S
p2: S -> "b" S
p3: S -> eps
)";

// Enumerates all strings over {a, b} up to `max_len`, shortest first.
std::vector<std::string> ab_strings(std::size_t max_len) {
  std::vector<std::string> out = {""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() >= max_len) continue;
    out.push_back(out[i] + "a");
    out.push_back(out[i] + "b");
  }
  return out;
}

}  // namespace

TEST_CASE("unambiguous parse produces exactly one trace") {
  Grammar g = compile_grammar(kDemoGrammar);
  std::vector<DerivationTrace> traces =
      parse_traces(g, tokenize_chars("aab"));
  REQUIRE(traces.size() == 1);
  CHECK(labels_of(traces[0]) ==
        std::vector<std::string>{"p1", "p1", "p2", "p3"});
}

TEST_CASE("unparseable input yields no traces and a progress point") {
  Grammar g = compile_grammar(kDemoGrammar);
  CHECK(parse_traces(g, tokenize_chars("abc")).empty());
  ParseRun run = parse_traces_diagnosed(g, tokenize_chars("abc"));
  CHECK(run.traces.empty());
  CHECK(run.progress == 2);  // "ab" still viable, "abc" is not
}

TEST_CASE("empty input parses iff the grammar derives epsilon") {
  Grammar g = compile_grammar(kDemoGrammar);
  std::vector<DerivationTrace> traces = parse_traces(g, {});
  REQUIRE(traces.size() == 1);
  CHECK(labels_of(traces[0]) == std::vector<std::string>{"p3"});
  // Events over an empty input have no spans to cover.
  CHECK_FALSE(traces[0].events[0].span.has_value());

  Grammar no_eps = compile_grammar("p1: S -> \"a\"\n");
  CHECK(parse_traces(no_eps, {}).empty());
}

TEST_CASE("production events carry the span of their yield") {
  Grammar g = compile_grammar(kDemoGrammar);
  std::vector<Token> input = tokenize_chars("ab");
  std::vector<DerivationTrace> traces = parse_traces(g, input);
  REQUIRE(traces.size() == 1);
  const std::vector<ProductionEvent>& events = traces[0].events;
  REQUIRE(events.size() == 3);  // p1 p2 p3
  // p1 derives the whole string, p2 the trailing "b", p3 nothing.
  CHECK(events[0].span == SourceSpan{0, 2});
  CHECK(events[1].span == SourceSpan{1, 2});
  // Empty yields collapse to their position instead of spanning.
  REQUIRE(events[2].span.has_value());
  CHECK(events[2].span->start == events[2].span->end);
}

TEST_CASE("ambiguous grammars produce all traces in sorted order") {
  // Two labeled copies of the same production make every string with one
  // "x" doubly derivable.
  Grammar g = compile_grammar(
      "pa: S -> \"x\"\n"
      "pb: S -> \"x\"\n");
  std::vector<DerivationTrace> traces = parse_traces(g, tokenize_chars("x"));
  REQUIRE(traces.size() == 2);
  CHECK(labels_of(traces[0]) == std::vector<std::string>{"pa"});
  CHECK(labels_of(traces[1]) == std::vector<std::string>{"pb"});
}

TEST_CASE("trace budget caps ambiguous extraction") {
  // 2^3 derivations of "xxx".
  Grammar g = compile_grammar(
      "pa: X -> \"x\"\n"
      "pb: X -> \"x\"\n"
      "s1: S -> X X X\n"
      "start: S\n");
  ParseOptions opts;
  opts.max_traces = 8;
  CHECK(parse_traces(g, tokenize_chars("xxx"), opts).size() == 8);
  opts.max_traces = 7;
  CHECK_THROWS_AS(parse_traces(g, tokenize_chars("xxx"), opts), BudgetError);
}

TEST_CASE("cyclic derivations are reported as a budget overflow") {
  // S -> S is a unit cycle: "x" has infinitely many leftmost derivations.
  Grammar g = compile_grammar(
      "loop: S -> S\n"
      "leaf: S -> \"x\"\n");
  CHECK_THROWS_AS(parse_traces(g, tokenize_chars("x")), BudgetError);
  try {
    parse_traces(g, tokenize_chars("x"));
  } catch (const BudgetError& e) {
    CHECK(e.kind() == BudgetError::Kind::kTraces);
  }
}

TEST_CASE("nullable nonterminals and long empty chains parse") {
  Grammar g = compile_grammar(
      "s: S -> A B \"x\"\n"
      "a1: A -> eps\n"
      "b1: B -> A A\n"
      "start: S\n");
  std::vector<DerivationTrace> traces = parse_traces(g, tokenize_chars("x"));
  REQUIRE(traces.size() == 1);
  CHECK(labels_of(traces[0]) ==
        std::vector<std::string>{"s", "a1", "b1", "a1", "a1"});
}

TEST_CASE("custom terminal matcher drives matching and binding") {
  Grammar g = compile_grammar("e1: X -> digit 2k(word) digit\n");
  TerminalMatcher matcher = [](const Symbol& symbol,
                               const Token& token) -> MatchResult {
    if (symbol.kind == SymbolKind::kParamTerminal) {
      if (token.klass == 2) return {true, "w:" + token.text};
      return {false, std::nullopt};
    }
    return {symbol.name == "digit" && token.klass == 1, std::nullopt};
  };
  std::vector<Token> input = {
      {"7", SourceSpan{0, 1}, 1},
      {"hi", SourceSpan{1, 3}, 2},
      {"9", SourceSpan{3, 4}, 1},
  };
  ParseOptions opts;
  opts.matcher = matcher;
  std::vector<DerivationTrace> traces = parse_traces(g, input, opts);
  REQUIRE(traces.size() == 1);
  CHECK(labels_of(traces[0]) ==
        std::vector<std::string>{"e1", "2k(w:hi)"});
  // The binding event carries the matched token's span.
  CHECK(traces[0].events[1].span == SourceSpan{1, 3});

  // Swapping token classes makes the same text unparseable.
  std::vector<Token> bad = {
      {"7", SourceSpan{0, 1}, 2},
      {"hi", SourceSpan{1, 3}, 1},
      {"9", SourceSpan{3, 4}, 1},
  };
  CHECK(parse_traces(g, bad, opts).empty());
}

TEST_CASE("default matcher compares exact text and binds parameters") {
  Grammar g = compile_grammar("e1: X -> \"let\" 2k(name)\n");
  std::vector<Token> input = {
      {"let", SourceSpan{0, 3}, 0},
      {"count", SourceSpan{4, 9}, 0},
  };
  std::vector<DerivationTrace> traces = parse_traces(g, input);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].events[1].parameter == "count");
}

TEST_CASE("tokenize_chars produces one token per byte") {
  std::vector<Token> tokens = tokenize_chars("ab");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].text == "a");
  CHECK(tokens[0].span == SourceSpan{0, 1});
  CHECK(tokens[1].span == SourceSpan{1, 2});
  CHECK(tokenize_chars("").empty());
}

TEST_CASE("round trip: parse then replay reproduces every short string") {
  Grammar g = compile_grammar(kDemoGrammar);
  for (const std::string& s : ab_strings(6)) {
    CAPTURE(s);
    std::vector<DerivationTrace> traces = parse_traces(g, tokenize_chars(s));
    REQUIRE(traces.size() == 1);  // the grammar is unambiguous
    SententialForm form = leftmost_derive(g, traces[0].events);
    REQUIRE(form.complete());
    std::string rebuilt;
    for (const Symbol& symbol : form.symbols) rebuilt += symbol.name;
    CHECK(rebuilt == s);
  }
}

TEST_CASE("progress reaches the input size for proper prefixes") {
  // "aab" is a proper prefix of longer members; a missing continuation is
  // only discovered at the very end.
  Grammar g = compile_grammar(
      "p1: S -> \"a\" S\n"
      "p2: S -> \"b\"\n");
  ParseRun run = parse_traces_diagnosed(g, tokenize_chars("aa"));
  CHECK(run.traces.empty());
  CHECK(run.progress == 2);
  ParseRun bad = parse_traces_diagnosed(g, tokenize_chars("ba"));
  CHECK(bad.traces.empty());
  CHECK(bad.progress == 1);
}
