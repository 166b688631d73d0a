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
// A C-System pairs a controlled grammar with one or more controlling
// automata over its derivation events.  An input belongs to the global
// language when some leftmost-derivation trace of the input is accepted by
// every control: existential over traces, conjunctive over controls.

#ifndef CSYS_CSYSTEM_HPP_
#define CSYS_CSYSTEM_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "csys/control.hpp"
#include "csys/grammar.hpp"
#include "csys/parser.hpp"

namespace csys {

class CSystem {
 public:
  // Validates that every control can classify every event the controlled
  // grammar may emit (production labels and parameterized-terminal
  // bindings).  Throws InvalidArgument on an uncovered event or when
  // `controls` is empty.
  CSystem(Grammar controlled, std::vector<ControllingAutomaton> controls);

  const Grammar& controlled() const { return controlled_; }
  const std::vector<ControllingAutomaton>& controls() const {
    return controls_;
  }
  bool controlled_right_linear() const { return controlled_right_linear_; }
  bool controls_all_finite() const { return controls_all_finite_; }

 private:
  Grammar controlled_;
  std::vector<ControllingAutomaton> controls_;
  bool controlled_right_linear_ = false;
  bool controls_all_finite_ = false;
};

struct ControlOutcome {
  std::string rule_id;
  bool accepted = false;
  // See ControlVerdict::first_dead_index; meaningful when !accepted.
  std::size_t first_dead_index = 0;
};

enum class MembershipStatus {
  kInGlobalLanguage,
  kRejectedByControlled,  // no leftmost-derivation trace at all
  kRejectedByControls,    // derivable, but every trace fails some control
};

struct MembershipResult {
  MembershipStatus status = MembershipStatus::kRejectedByControlled;
  // All candidate traces found by the parser (lexicographically sorted).
  std::vector<DerivationTrace> traces;
  // Index into `traces`: the accepted witness, or the trace that survived
  // longest before a control rejected it.
  std::size_t best_trace = 0;
  // Per-control outcomes for traces[best_trace].
  std::vector<ControlOutcome> outcomes;

  bool member() const { return status == MembershipStatus::kInGlobalLanguage; }
};

// Decides input membership in the global language.  Budget overflows from
// trace enumeration propagate as BudgetError.
MembershipResult membership(const CSystem& system,
                            const std::vector<Token>& input,
                            const ParseOptions& options = ParseOptions{});

// Convenience overload: each character of `input` becomes one token.
MembershipResult membership(const CSystem& system, const std::string& input);

// Runs every control over one trace in a single streaming pass.
std::vector<ControlOutcome> check_trace(
    const CSystem& system, const std::vector<ProductionEvent>& events);

// Family tag, e.g. "C_R^R": subscript is the controlled grammar kind
// (R = right-linear), superscript the control kind (CF if any control is
// pushdown).
std::string classify(const CSystem& system);

}  // namespace csys

#endif  // CSYS_CSYSTEM_HPP_
