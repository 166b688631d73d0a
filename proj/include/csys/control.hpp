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
// Controlling automata: machines whose input alphabet is made of event
// classes over derivation-trace events.  A rule source declares the classes
// and a grammar over them; right-linear grammars compile to deterministic
// finite controls (with an implicit absorbing error sink), anything else to
// a pushdown control simulated nondeterministically.

#ifndef CSYS_CONTROL_HPP_
#define CSYS_CONTROL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csys/grammar.hpp"

namespace csys {

// A set of trace events.  Non-wildcard classes within one alphabet are
// pairwise disjoint; the wildcard (at most one) matches exactly the events
// no other class matches.
struct EventClass {
  enum class Kind {
    kExact,        // label equality, any parameter
    kParam,        // label equality and parameter equality
    kExactExcept,  // label equality, parameter not among excluded_params
    kWildcard,     // complement of the other classes in its alphabet
  };

  std::string name;
  Kind kind = Kind::kExact;
  std::string label;
  std::string param;
  std::vector<std::string> excluded_params;

  // Non-wildcard match test (wildcards need the whole alphabet; see
  // classify_event).
  bool matches(const ProductionEvent& event) const;
};

// Index into `alphabet` of the unique class containing `event`.  Falls back
// to the wildcard when no declared class matches; throws InvalidArgument if
// there is no wildcard either.
std::size_t classify_event(const std::vector<EventClass>& alphabet,
                           const ProductionEvent& event);

// Deterministic finite control.  State 0 is the start state; a missing
// transition leads to the implicit absorbing error sink.  Every retained
// state can still reach an accepting state, so entering the sink is the
// earliest provably-hopeless point of a run.
struct FiniteControl {
  std::vector<EventClass> alphabet;
  std::size_t state_count = 0;
  std::vector<bool> accepting;   // indexed by state
  std::vector<int> transitions;  // [state * alphabet.size() + class]; -1=sink

  int next(int state, std::size_t klass) const {
    return transitions[static_cast<std::size_t>(state) * alphabet.size() +
                       klass];
  }
};

// Pushdown control compiled from a context-free rule grammar.  The machine
// is the standard top-down construction: a loop state expands nonterminals
// on the stack and consumes event classes; reaching the stack bottom allows
// a move into the accept state.
struct PushdownControl {
  std::vector<EventClass> alphabet;

  // Stack symbols: 0..alphabet.size()-1 are the classes, the rest are
  // nonterminals.
  struct StackProduction {
    int lhs = 0;
    std::vector<int> rhs;
  };
  std::vector<StackProduction> productions;
  int start_symbol = 0;
  bool accept_by_empty_stack = false;

  // Guard against configuration explosion in nondeterministic simulation.
  std::size_t config_budget = 50'000;
};

struct ControllingAutomaton {
  std::string rule_id;
  std::string description;
  std::variant<FiniteControl, PushdownControl> machine;

  bool finite() const {
    return std::holds_alternative<FiniteControl>(machine);
  }
  const std::vector<EventClass>& alphabet() const {
    return finite() ? std::get<FiniteControl>(machine).alphabet
                    : std::get<PushdownControl>(machine).alphabet;
  }
  // Number of non-sink states (finite controls only).
  std::size_t live_state_count() const {
    return std::get<FiniteControl>(machine).state_count;
  }
};

struct ControlVerdict {
  bool accepted = false;
  // Meaningful when rejected: index of the event whose consumption made
  // acceptance impossible, or the trace length when the trace merely ended
  // in a non-accepting configuration.
  std::size_t first_dead_index = 0;
};

// Compiles rule source of the form
//
//   rule "R1-single-generalization"
//   description "optional human text"
//   accept = state            # or empty-stack; pushdown rules only
//   events {
//     c = 2k("Class")
//     g = 2k("Generalization")
//     D = other
//   }
//   grammar {
//     s0: S -> eps
//     s1: S -> c Q
//     ...
//   }
//
// The grammar block uses the regular grammar syntax over the declared class
// names, plus postfix '*' repetition.  Throws SyntaxError.
ControllingAutomaton compile_rule(const std::string& source);

// Runs the control over a whole trace.
ControlVerdict accepts(const ControllingAutomaton& automaton,
                       const std::vector<ProductionEvent>& events);

// Product construction.  Both controls must be finite; their alphabets are
// merged by refining the event classes into a common disjoint partition.
// The result accepts exactly the traces both inputs accept.
ControllingAutomaton intersect(const ControllingAutomaton& a,
                               const ControllingAutomaton& b);

// Incremental runner: feeds one event at a time so violations can be
// reported with positions from a single pass over the trace.
class ControlRunner {
 public:
  explicit ControlRunner(const ControllingAutomaton& automaton);

  void feed(const ProductionEvent& event);
  bool dead() const { return dead_; }
  std::size_t dead_index() const { return dead_index_; }
  // Verdict for everything fed so far, taken as a complete trace.
  ControlVerdict finish() const;

 private:
  struct PdaConfig {
    bool accepted = false;
    std::vector<int> stack;  // top at back; empty = bottom marker on top

    friend auto operator<=>(const PdaConfig&, const PdaConfig&) = default;
  };

  void pda_closure(std::vector<PdaConfig>& configs) const;

  const ControllingAutomaton& automaton_;
  std::size_t fed_ = 0;
  bool dead_ = false;
  std::size_t dead_index_ = 0;
  int state_ = 0;                   // finite control
  std::vector<PdaConfig> configs_;  // pushdown control
};

}  // namespace csys

#endif  // CSYS_CONTROL_HPP_
