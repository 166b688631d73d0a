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
// Built-in UML guideline rules, expressed as controlling automata over the
// XMI document grammar's trace events.  Each rule is generated as rule
// source text (the same text ships under rules/ for users to copy-adapt)
// and compiled by the generic rule compiler.

#ifndef CSYS_RULES_HPP_
#define CSYS_RULES_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "csys/control.hpp"

namespace csys {

struct RuleConfig {
  // Bound used by the attribute-count rule; must be >= 1.
  std::size_t max_attributes = 30;
  // Rule ids to instantiate; empty means all built-ins.
  std::vector<std::string> enabled;
};

// "R1-single-generalization": a class may declare at most one
// generalization.  Finite control over {c = 2k("Class"),
// g = 2k("Generalization"), D = other}; rejects as soon as a second g
// occurs after a c with no c in between.
ControllingAutomaton rule_single_generalization();

// "R2-max-attributes": a class may declare at most n attributes.  Finite
// control over {c = 2k("Class"), pr = 2k("Property"),
// pe = 2k("packagedElement"), D = other}; rejects at the (n+1)-th pr after
// a c with no intervening c or pe.  n + 2 live states.  Throws
// InvalidArgument when n < 1.
ControllingAutomaton rule_max_attributes(std::size_t n = 30);

// "R3-fork-join-balance": each fork node's outgoing-edge count equals its
// paired join node's incoming-edge count.  Pushdown control over
// {n = 2k("node"), f = 2k("ForkNode"), j = 2k("JoinNode"),
// i = 2k("incoming"), o = 2k("outgoing"), D = other}.  Expects traces
// normalized by normalize_activity_order.
ControllingAutomaton rule_fork_join_balance();

// Stable ids of all built-ins, in reporting order.
const std::vector<std::string>& builtin_rule_ids();
bool is_builtin_rule(const std::string& id);

// The rule source text a given built-in compiles from.  Bound-dependent
// rules use config.max_attributes.  Throws InvalidArgument for unknown ids.
std::string builtin_rule_source(const std::string& id,
                                const RuleConfig& config = {});

// Instantiates one built-in by id.  Throws InvalidArgument for unknown ids
// or invalid config.
ControllingAutomaton make_builtin_rule(const std::string& id,
                                       const RuleConfig& config = {});

// All rules selected by `config.enabled` (all built-ins when empty), in
// builtin_rule_ids() order.
std::vector<ControllingAutomaton> make_rules(const RuleConfig& config = {});

}  // namespace csys

#endif  // CSYS_RULES_HPP_
