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

#include "csys/csystem.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <utility>

#include "csys/errors.hpp"

namespace csys {
namespace {

// A parameter value no declared parameter class matches, to probe whether an
// alphabet covers arbitrary bindings of a parameterized terminal.
std::string unmatched_param_probe(const std::vector<EventClass>& alphabet,
                                  const std::string& label) {
  std::string probe = "__unbound__";
  auto collides = [&] {
    for (const EventClass& klass : alphabet) {
      if (klass.kind == EventClass::Kind::kParam && klass.label == label &&
          klass.param == probe) {
        return true;
      }
    }
    return false;
  };
  while (collides()) probe += "_";
  return probe;
}

}  // namespace

CSystem::CSystem(Grammar controlled,
                 std::vector<ControllingAutomaton> controls)
    : controlled_(std::move(controlled)), controls_(std::move(controls)) {
  if (controls_.empty()) {
    throw InvalidArgument("a C-System needs at least one control");
  }
  for (const ControllingAutomaton& control : controls_) {
    const std::vector<EventClass>& alphabet = control.alphabet();
    auto require_classifiable = [&](const ProductionEvent& event) {
      try {
        classify_event(alphabet, event);
      } catch (const InvalidArgument&) {
        std::string what = event.label;
        if (event.parameter) what += "(...)";
        throw InvalidArgument("rule '" + control.rule_id +
                              "' cannot classify event '" + what +
                              "' of the controlled grammar");
      }
    };
    for (const std::string& label : controlled_.event_labels()) {
      require_classifiable(
          ProductionEvent{label, std::nullopt, std::nullopt, std::nullopt});
    }
    for (const std::string& name : controlled_.param_terminals()) {
      require_classifiable(ProductionEvent{
          name, unmatched_param_probe(alphabet, name), std::nullopt,
          std::nullopt});
    }
  }
  controlled_right_linear_ = controlled_.is_right_linear();
  controls_all_finite_ =
      std::all_of(controls_.begin(), controls_.end(),
                  [](const ControllingAutomaton& c) { return c.finite(); });
}

std::vector<ControlOutcome> check_trace(
    const CSystem& system, const std::vector<ProductionEvent>& events) {
  std::vector<ControlRunner> runners;
  runners.reserve(system.controls().size());
  for (const ControllingAutomaton& control : system.controls()) {
    runners.emplace_back(control);
  }
  for (const ProductionEvent& event : events) {
    for (ControlRunner& runner : runners) runner.feed(event);
  }
  std::vector<ControlOutcome> outcomes;
  outcomes.reserve(runners.size());
  for (std::size_t i = 0; i < runners.size(); ++i) {
    ControlVerdict verdict = runners[i].finish();
    outcomes.push_back(ControlOutcome{system.controls()[i].rule_id,
                                      verdict.accepted,
                                      verdict.first_dead_index});
  }
  return outcomes;
}

MembershipResult membership(const CSystem& system,
                            const std::vector<Token>& input,
                            const ParseOptions& options) {
  MembershipResult result;
  result.traces = parse_traces(system.controlled(), input, options);
  if (result.traces.empty()) {
    result.status = MembershipStatus::kRejectedByControlled;
    return result;
  }

  // Pick the accepted trace if one exists; otherwise the trace whose
  // earliest control rejection happens latest (ties to the first trace).
  std::size_t best_score = 0;
  bool have_best = false;
  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    std::vector<ControlOutcome> outcomes =
        check_trace(system, result.traces[i].events);
    bool all_accepted =
        std::all_of(outcomes.begin(), outcomes.end(),
                    [](const ControlOutcome& o) { return o.accepted; });
    if (all_accepted) {
      result.status = MembershipStatus::kInGlobalLanguage;
      result.best_trace = i;
      result.outcomes = std::move(outcomes);
      return result;
    }
    std::size_t score = std::numeric_limits<std::size_t>::max();
    for (const ControlOutcome& outcome : outcomes) {
      if (!outcome.accepted) {
        score = std::min(score, outcome.first_dead_index);
      }
    }
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      result.best_trace = i;
      result.outcomes = std::move(outcomes);
    }
  }
  result.status = MembershipStatus::kRejectedByControls;
  return result;
}

MembershipResult membership(const CSystem& system, const std::string& input) {
  return membership(system, tokenize_chars(input), ParseOptions{});
}

std::string classify(const CSystem& system) {
  std::string tag = "C_";
  tag += system.controlled_right_linear() ? "R" : "CF";
  tag += "^";
  tag += system.controls_all_finite() ? "R" : "CF";
  return tag;
}

}  // namespace csys
