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

#include "csys/rules.hpp"

#include <algorithm>
#include <sstream>

#include "csys/errors.hpp"

namespace csys {

namespace {

std::string single_generalization_source() {
  return R"rule(rule "R1-single-generalization"
description "Each class has at most one generalization."
accept = state

# One qualified-name event per self-closing tag, two per open/close pair.
# A class contributes a c when its xmi:type value "uml:Class" is bound; a
# generalization contributes a g the same way.  Everything else is D.
events {
  c = 2k("Class")
  g = 2k("Generalization")
  D = other
}

# S: outside any class (g is harmless here); Q: inside a class with no
# generalization yet; R: inside a class holding its one generalization.  A
# second g before the next c has no production, i.e. leads to the sink.
grammar {
  start: S
  s_1: S -> c Q
  s_2: S -> g S
  s_3: S -> D S
  s_4: S -> eps
  q_1: Q -> c Q
  q_2: Q -> g R
  q_3: Q -> D Q
  q_4: Q -> eps
  r_1: R -> c Q
  r_2: R -> D R
  r_3: R -> eps
}
)rule";
}

std::string max_attributes_source(std::size_t n) {
  std::ostringstream out;
  out << "rule \"R2-max-attributes\"\n"
      << "description \"Each class has at most " << n << " attribute"
      << (n == 1 ? "" : "s") << ".\"\n"
      << "accept = state\n"
      << "\n"
      << "# Property events are counted per class; the count resets at the\n"
      << "# next class or packaged element.  Properties outside any class\n"
      << "# are not counted.\n"
      << "events {\n"
      << "  c = 2k(\"Class\")\n"
      << "  pr = 2k(\"Property\")\n"
      << "  pe = 2k(\"packagedElement\")\n"
      << "  D = other\n"
      << "}\n"
      << "\n"
      << "# S: outside any class; Qc: inside a class with 0 properties;\n"
      << "# Qk: inside a class with k properties.  Q" << n
      << " has no pr production,\n"
      << "# so one more property leads to the sink.\n"
      << "grammar {\n"
      << "  start: S\n"
      << "  s_1: S -> pe S\n"
      << "  s_2: S -> c Qc\n"
      << "  s_3: S -> pr S\n"
      << "  s_4: S -> D S\n"
      << "  s_5: S -> eps\n";
  auto state_name = [&](std::size_t i) {
    return i == 0 ? std::string("Qc") : "Q" + std::to_string(i);
  };
  for (std::size_t i = 0; i <= n; ++i) {
    std::string q = state_name(i);
    std::string prefix = "  q" + std::to_string(i) + "_";
    out << prefix << "1: " << q << " -> pe S\n";
    out << prefix << "2: " << q << " -> c Qc\n";
    if (i < n) {
      out << prefix << "3: " << q << " -> pr " << state_name(i + 1) << "\n";
    }
    out << prefix << "4: " << q << " -> D " << q << "\n";
    out << prefix << "5: " << q << " -> eps\n";
  }
  out << "}\n";
  return out.str();
}

std::string fork_join_balance_source() {
  return R"rule(rule "R3-fork-join-balance"
description "Each fork node's outgoing edges match its paired join node's incoming edges."
accept = state

# A node group in a trace reads  n <type> i... o... n  (self-closing
# incoming/outgoing references emit one event each; the node's open and
# close tags emit one n each).  Incoming references are expected before
# outgoing ones; run the activity-order normalization first.
events {
  n = 2k("node")
  f = 2k("ForkNode")
  j = 2k("JoinNode")
  i = 2k("incoming")
  o = 2k("outgoing")
  D = other
}

# S covers one group: a fork/join pair (with Q matching the fork's o-count
# against the join's i-count one by one), a plain node, or a run of
# unrelated events.  Top chains sibling groups.
grammar {
  start: Top
  t_1: Top -> S Top
  t_2: Top -> eps
  s_1: S -> N F I* Q O* N
  s_2: S -> N I* O* N
  s_3: S -> D*
  q_1: Q -> O Q I
  q_2: Q -> N S N J
  n_1: N -> n D*
  f_1: F -> f D*
  j_1: J -> j D*
  i_1: I -> i D*
  o_1: O -> o D*
}
)rule";
}

}  // namespace

ControllingAutomaton rule_single_generalization() {
  return compile_rule(single_generalization_source());
}

ControllingAutomaton rule_max_attributes(std::size_t n) {
  if (n < 1) {
    throw InvalidArgument("the attribute bound must be at least 1");
  }
  return compile_rule(max_attributes_source(n));
}

ControllingAutomaton rule_fork_join_balance() {
  return compile_rule(fork_join_balance_source());
}

const std::vector<std::string>& builtin_rule_ids() {
  static const std::vector<std::string> ids = {
      "R1-single-generalization",
      "R2-max-attributes",
      "R3-fork-join-balance",
  };
  return ids;
}

bool is_builtin_rule(const std::string& id) {
  const std::vector<std::string>& ids = builtin_rule_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string builtin_rule_source(const std::string& id,
                                const RuleConfig& config) {
  if (id == "R1-single-generalization") return single_generalization_source();
  if (id == "R2-max-attributes") {
    if (config.max_attributes < 1) {
      throw InvalidArgument("the attribute bound must be at least 1");
    }
    return max_attributes_source(config.max_attributes);
  }
  if (id == "R3-fork-join-balance") return fork_join_balance_source();
  throw InvalidArgument("unknown built-in rule '" + id + "'");
}

ControllingAutomaton make_builtin_rule(const std::string& id,
                                       const RuleConfig& config) {
  return compile_rule(builtin_rule_source(id, config));
}

std::vector<ControllingAutomaton> make_rules(const RuleConfig& config) {
  std::vector<ControllingAutomaton> rules;
  for (const std::string& id : builtin_rule_ids()) {
    if (!config.enabled.empty() &&
        std::find(config.enabled.begin(), config.enabled.end(), id) ==
            config.enabled.end()) {
      continue;
    }
    rules.push_back(make_builtin_rule(id, config));
  }
  if (!config.enabled.empty()) {
    for (const std::string& id : config.enabled) {
      if (!is_builtin_rule(id)) {
        throw InvalidArgument("unknown built-in rule '" + id + "'");
      }
    }
  }
  return rules;
}

}  // namespace csys
