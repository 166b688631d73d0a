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

#include <cstddef>
#include <string>
#include <vector>

#include "csys/control.hpp"
#include "csys/errors.hpp"
#include "csys/rules.hpp"
#include "csys/xmi.hpp"

#include "testing.hpp"

using namespace csys;
using csys::testing::letters;
using csys::testing::read_file;

namespace {

ControlVerdict run(const ControllingAutomaton& rule, const std::string& word) {
  return accepts(rule, letters(word));
}

// All strings over `alphabet` up to length `max_len`.
std::vector<std::string> words(const std::string& alphabet,
                               std::size_t max_len) {
  std::vector<std::string> out = {""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() >= max_len) continue;
    for (char c : alphabet) out.push_back(out[i] + c);
  }
  return out;
}

}  // namespace

TEST_CASE("built-in rules are enumerable and individually constructible") {
  const std::vector<std::string>& ids = builtin_rule_ids();
  REQUIRE(ids == std::vector<std::string>{"R1-single-generalization",
                                          "R2-max-attributes",
                                          "R3-fork-join-balance"});
  for (const std::string& id : ids) {
    CHECK(is_builtin_rule(id));
    ControllingAutomaton rule = make_builtin_rule(id);
    CHECK(rule.rule_id == id);
    CHECK_FALSE(rule.description.empty());
  }
  CHECK_FALSE(is_builtin_rule("R4-unknown"));
  CHECK_THROWS_AS(make_builtin_rule("R4-unknown"), InvalidArgument);
  CHECK_THROWS_AS(builtin_rule_source("R4-unknown"), InvalidArgument);
}

TEST_CASE("make_rules instantiates the configured subset in stable order") {
  std::vector<ControllingAutomaton> all = make_rules();
  REQUIRE(all.size() == 3);
  CHECK(all[0].rule_id == "R1-single-generalization");
  CHECK(all[2].rule_id == "R3-fork-join-balance");

  RuleConfig config;
  config.enabled = {"R3-fork-join-balance", "R1-single-generalization"};
  std::vector<ControllingAutomaton> some = make_rules(config);
  REQUIRE(some.size() == 2);
  CHECK(some[0].rule_id == "R1-single-generalization");  // canonical order
  CHECK(some[1].rule_id == "R3-fork-join-balance");

  RuleConfig bad;
  bad.enabled = {"R9-bogus"};
  CHECK_THROWS_AS(make_rules(bad), InvalidArgument);
}

TEST_CASE("the generalization rule allows at most one g per class segment") {
  ControllingAutomaton rule = rule_single_generalization();
  CHECK(rule.finite());
  CHECK(rule.live_state_count() == 3);

  CHECK(run(rule, "").accepted);
  CHECK(run(rule, "DDD").accepted);
  CHECK(run(rule, "cg").accepted);
  CHECK(run(rule, "cgcg").accepted);  // a new class resets the count
  CHECK(run(rule, "gg").accepted);    // g before any c is unconstrained
  CHECK(run(rule, "cDgD").accepted);

  ControlVerdict twice = run(rule, "cgg");
  CHECK_FALSE(twice.accepted);
  CHECK(twice.first_dead_index == 2);

  ControlVerdict spaced = run(rule, "DcDgDg");
  CHECK_FALSE(spaced.accepted);
  CHECK(spaced.first_dead_index == 5);
}

TEST_CASE("the generalization rule matches a brute-force segment oracle") {
  ControllingAutomaton rule = rule_single_generalization();
  // Oracle: after any c, at most one g may occur before the next c.
  auto ok = [](const std::string& word) {
    int gs = -1;  // -1: before the first c
    for (char ch : word) {
      if (ch == 'c') {
        gs = 0;
      } else if (ch == 'g' && gs >= 0 && ++gs > 1) {
        return false;
      }
    }
    return true;
  };
  for (const std::string& word : words("cgD", 6)) {
    CAPTURE(word);
    CHECK(run(rule, word).accepted == ok(word));
  }
}

TEST_CASE("the attribute-count rule sizes its counter from the bound") {
  CHECK(rule_max_attributes(1).live_state_count() == 3);
  CHECK(rule_max_attributes(2).live_state_count() == 4);
  CHECK(rule_max_attributes(5).live_state_count() == 7);
  CHECK(rule_max_attributes(30).live_state_count() == 32);
  CHECK(rule_max_attributes().live_state_count() == 32);
  CHECK_THROWS_AS(rule_max_attributes(0), InvalidArgument);

  RuleConfig config;
  config.max_attributes = 2;
  CHECK(make_builtin_rule("R2-max-attributes", config).live_state_count() ==
        4);
}

TEST_CASE("the attribute-count rule counts properties per class segment") {
  ControllingAutomaton rule = rule_max_attributes(2);

  CHECK(run(rule, "").accepted);
  CHECK(run(rule, "cpp").accepted);
  CHECK(run(rule, "pppp").accepted);   // properties outside any class
  CHECK(run(rule, "cppcpp").accepted); // a new class resets the counter
  CHECK(run(rule, "cppepp").accepted); // a packagedElement closes the segment
  CHECK(run(rule, "cpDpD").accepted);

  ControlVerdict over = run(rule, "cppp");
  CHECK_FALSE(over.accepted);
  CHECK(over.first_dead_index == 3);

  ControlVerdict tight = accepts(rule_max_attributes(1), letters("cpp"));
  CHECK_FALSE(tight.accepted);
  CHECK(tight.first_dead_index == 2);
}

TEST_CASE("raising the attribute bound only ever admits more traces") {
  for (std::size_t n = 1; n <= 3; ++n) {
    ControllingAutomaton tight = rule_max_attributes(n);
    ControllingAutomaton loose = rule_max_attributes(n + 1);
    for (const std::string& word : words("cpeD", 6)) {
      CAPTURE(n);
      CAPTURE(word);
      if (accepts(tight, letters(word)).accepted) {
        CHECK(accepts(loose, letters(word)).accepted);
      }
    }
  }
}

TEST_CASE("the fork/join rule balances outgoing against incoming counts") {
  ControllingAutomaton rule = rule_fork_join_balance();
  CHECK_FALSE(rule.finite());

  CHECK(run(rule, "").accepted);
  CHECK(run(rule, "DDDD").accepted);
  CHECK(run(rule, "nion").accepted);    // a plain node, no fork or join
  CHECK(run(rule, "nioon").accepted);   // decision-style: one in, two out
  CHECK(run(rule, "nfonnjin").accepted);
  CHECK(run(rule, "nfoonnjiin").accepted);
  CHECK(run(rule, "nfionnjion").accepted);  // extra edges on either group
  // Sequential pairs and nested pairs.
  CHECK(run(rule, "nfonnjinnfoonnjiin").accepted);
  CHECK(run(rule, "nfonnfoonnjiinnjin").accepted);
  // Filler material between the paired groups.
  CHECK(run(rule, "nfonDDnioonDDnjin").accepted);

  ControlVerdict more_in = run(rule, "nfonnjiin");
  CHECK_FALSE(more_in.accepted);
  CHECK(more_in.first_dead_index == 7);  // the join's second incoming

  CHECK_FALSE(run(rule, "nfoonnjin").accepted);
  CHECK_FALSE(run(rule, "nfonnjinnfonnjiin").accepted);
  CHECK_FALSE(run(rule, "nfon").accepted);  // fork without a join
  CHECK_FALSE(run(rule, "njin").accepted);  // join without a fork
}

TEST_CASE("built-in rules accept arbitrary unrelated events") {
  // Every built-in declares a wildcard, so foreign labels and bindings are
  // always classifiable.
  std::vector<ProductionEvent> noise = {
      csys::testing::ev("9z_9"), csys::testing::qname("Comment"),
      csys::testing::ev("2a_1")};
  for (const ControllingAutomaton& rule : make_rules()) {
    CHECK(accepts(rule, noise).accepted);
  }
}

TEST_CASE("shipped rule files are byte-identical to the built-in sources") {
  for (const std::string& id : builtin_rule_ids()) {
    CAPTURE(id);
    CHECK(read_file(std::string(CSYS_RULES_DIR) + "/" + id + ".rule") ==
          builtin_rule_source(id));
  }
  CHECK(read_file(std::string(CSYS_GRAMMARS_DIR) + "/uml-xmi.grammar") ==
        xmi_document_grammar_source());
}

TEST_CASE("the demo rule file compiles against the demo grammar") {
  std::string source =
      read_file(std::string(CSYS_RULES_DIR) + "/demo-a-before-b.rule");
  ControllingAutomaton rule = compile_rule(source);
  CHECK(rule.rule_id == "demo-a-before-b");
  CHECK(rule.finite());
  CHECK(accepts(rule, letters("")).accepted == false);
}
