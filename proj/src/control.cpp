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

#include "csys/control.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "csys/errors.hpp"
#include "csys/grammar_text.hpp"

namespace csys {
namespace {

std::string strip_comment(const std::string& line) {
  char quote = '\0';
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote != '\0') {
      if (c == quote) quote = '\0';
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         static_cast<unsigned char>(c) >= 0x80;
}

// Cursor over one logical line of rule source.
class LineCursor {
 public:
  LineCursor(std::string text, int line) : text_(std::move(text)), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw SyntaxError("expected '" + std::string(1, c) + "' " + what, line_);
    }
    ++pos_;
  }

  std::string word(const std::string& what) {
    skip_ws();
    std::size_t begin = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    if (pos_ == begin) throw SyntaxError("expected " + what, line_);
    return text_.substr(begin, pos_ - begin);
  }

  std::string quoted(const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
      throw SyntaxError("expected quoted " + what, line_);
    }
    char quote = text_[pos_++];
    std::size_t begin = pos_;
    while (pos_ < text_.size() && text_[pos_] != quote) ++pos_;
    if (pos_ >= text_.size()) {
      throw SyntaxError("unterminated quoted " + what, line_);
    }
    std::string value = text_.substr(begin, pos_ - begin);
    ++pos_;
    return value;
  }

  int line() const { return line_; }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  int line_;
};

struct RuleSpec {
  std::string id;
  std::string description;
  bool accept_by_empty_stack = false;
  bool accept_directive_seen = false;
  std::vector<EventClass> classes;
  std::string grammar_source;
  int grammar_line = 0;
  bool has_grammar = false;
};

// True when the two (non-wildcard) classes can both contain some event.
bool classes_overlap(const EventClass& a, const EventClass& b) {
  if (a.label != b.label) return false;
  using Kind = EventClass::Kind;
  if (a.kind == Kind::kExact || b.kind == Kind::kExact) return true;
  if (a.kind == Kind::kParam && b.kind == Kind::kParam)
    return a.param == b.param;
  auto param_vs_except = [](const EventClass& p, const EventClass& e) {
    return std::find(e.excluded_params.begin(), e.excluded_params.end(),
                     p.param) == e.excluded_params.end();
  };
  if (a.kind == Kind::kParam) return param_vs_except(a, b);
  if (b.kind == Kind::kParam) return param_vs_except(b, a);
  // Two "everything except ..." classes over one label always share the
  // no-parameter event.
  return true;
}

EventClass parse_class_entry(LineCursor& cursor) {
  EventClass klass;
  klass.name = cursor.word("event class name");
  cursor.expect('=', "after event class name");
  std::string head = cursor.word("event label or 'other'");
  if (head == "other") {
    klass.kind = EventClass::Kind::kWildcard;
  } else if (cursor.peek_is('(')) {
    cursor.expect('(', "");
    klass.kind = EventClass::Kind::kParam;
    klass.label = head;
    klass.param = cursor.quoted("parameter value");
    cursor.expect(')', "after parameter value");
  } else {
    klass.kind = EventClass::Kind::kExact;
    klass.label = head;
  }
  if (!cursor.at_end()) {
    throw SyntaxError("unexpected trailing text in event class entry",
                      cursor.line());
  }
  if (klass.name == "other" || klass.name == "eps" ||
      klass.name == "\xce\xb5") {
    throw SyntaxError("event class may not be named '" + klass.name + "'",
                      cursor.line());
  }
  return klass;
}

RuleSpec parse_rule_source(const std::string& source) {
  RuleSpec spec;
  std::vector<std::string> lines;
  {
    std::string current;
    std::istringstream stream(source);
    while (std::getline(stream, current)) lines.push_back(current);
  }

  enum class Block { kNone, kEvents, kGrammar };
  Block block = Block::kNone;
  bool saw_rule = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i) + 1;
    std::string line =
        trim(block == Block::kGrammar ? lines[i] : strip_comment(lines[i]));
    if (block == Block::kGrammar) {
      if (trim(strip_comment(lines[i])) == "}") {
        block = Block::kNone;
        continue;
      }
      spec.grammar_source += lines[i];
      spec.grammar_source += '\n';
      continue;
    }
    if (line.empty()) continue;
    if (block == Block::kEvents) {
      if (line == "}") {
        block = Block::kNone;
        continue;
      }
      LineCursor cursor(line, line_no);
      spec.classes.push_back(parse_class_entry(cursor));
      continue;
    }

    LineCursor cursor(line, line_no);
    std::string keyword = cursor.word("directive");
    if (!saw_rule) {
      if (keyword != "rule") {
        throw SyntaxError("rule source must start with: rule \"<id>\"",
                          line_no);
      }
      spec.id = cursor.quoted("rule id");
      if (spec.id.empty()) throw SyntaxError("empty rule id", line_no);
      if (!cursor.at_end())
        throw SyntaxError("unexpected text after rule id", line_no);
      saw_rule = true;
      continue;
    }
    if (keyword == "rule") {
      throw SyntaxError("duplicate rule directive", line_no);
    } else if (keyword == "description") {
      spec.description = cursor.quoted("description");
    } else if (keyword == "accept") {
      cursor.expect('=', "after accept");
      std::string mode = cursor.word("acceptance mode");
      if (mode == "empty" && cursor.peek_is('-')) {
        cursor.expect('-', "");
        mode += "-" + cursor.word("acceptance mode");
      }
      if (mode == "state") {
        spec.accept_by_empty_stack = false;
      } else if (mode == "empty-stack") {
        spec.accept_by_empty_stack = true;
      } else {
        throw SyntaxError("acceptance mode must be state or empty-stack",
                          line_no);
      }
      spec.accept_directive_seen = true;
    } else if (keyword == "events") {
      cursor.expect('{', "to open events block");
      block = Block::kEvents;
    } else if (keyword == "grammar") {
      cursor.expect('{', "to open grammar block");
      block = Block::kGrammar;
      spec.grammar_line = line_no;
      spec.has_grammar = true;
    } else {
      throw SyntaxError("unknown directive '" + keyword + "'", line_no);
    }
    // Block contents are line-oriented; nothing may follow an opening brace.
    if (!cursor.at_end()) {
      throw SyntaxError("unexpected trailing text", line_no);
    }
  }

  if (block != Block::kNone) throw SyntaxError("unterminated block", 0);
  if (!saw_rule) throw SyntaxError("missing rule directive", 0);
  if (!spec.has_grammar) throw SyntaxError("missing grammar block", 0);

  std::set<std::string> names;
  std::size_t wildcards = 0;
  for (const EventClass& klass : spec.classes) {
    if (!names.insert(klass.name).second) {
      throw SyntaxError("duplicate event class '" + klass.name + "'", 0);
    }
    if (klass.kind == EventClass::Kind::kWildcard) ++wildcards;
  }
  if (wildcards > 1) {
    throw SyntaxError("at most one event class may be 'other'", 0);
  }
  for (std::size_t a = 0; a < spec.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.classes.size(); ++b) {
      const EventClass& ca = spec.classes[a];
      const EventClass& cb = spec.classes[b];
      if (ca.kind == EventClass::Kind::kWildcard ||
          cb.kind == EventClass::Kind::kWildcard)
        continue;
      if (classes_overlap(ca, cb)) {
        throw SyntaxError("event classes '" + ca.name + "' and '" + cb.name +
                              "' overlap",
                          0);
      }
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Finite compilation: right-linear grammar -> NFA -> subset DFA -> pruning.

struct Nfa {
  std::vector<std::map<std::size_t, std::vector<int>>> moves;
  std::vector<std::vector<int>> eps;
  int start = 0;
  int accept = 0;

  int fresh() {
    moves.emplace_back();
    eps.emplace_back();
    return static_cast<int>(moves.size()) - 1;
  }
};

Nfa build_nfa(const Grammar& grammar,
              const std::map<std::string, std::size_t>& class_index) {
  Nfa nfa;
  std::map<std::string, int> nt_state;
  for (const LabeledProduction& p : grammar.productions()) {
    if (!nt_state.count(p.lhs)) nt_state[p.lhs] = nfa.fresh();
    for (const Symbol& s : p.rhs) {
      if (s.kind == SymbolKind::kNonterminal && !nt_state.count(s.name)) {
        nt_state[s.name] = nfa.fresh();
      }
    }
  }
  nfa.start = nt_state.at(grammar.start());
  nfa.accept = nfa.fresh();

  for (const LabeledProduction& p : grammar.productions()) {
    bool trailing_nt = !p.rhs.empty() &&
                       p.rhs.back().kind == SymbolKind::kNonterminal;
    std::size_t terminal_count = p.rhs.size() - (trailing_nt ? 1 : 0);
    int tail = trailing_nt ? nt_state.at(p.rhs.back().name) : nfa.accept;
    int current = nt_state.at(p.lhs);
    if (terminal_count == 0) {
      nfa.eps[current].push_back(tail);
      continue;
    }
    for (std::size_t i = 0; i < terminal_count; ++i) {
      int target = (i + 1 == terminal_count) ? tail : nfa.fresh();
      nfa.moves[current][class_index.at(p.rhs[i].name)].push_back(target);
      current = target;
    }
  }
  return nfa;
}

std::vector<int> eps_closure(const Nfa& nfa, std::vector<int> states) {
  std::set<int> seen(states.begin(), states.end());
  std::deque<int> queue(states.begin(), states.end());
  while (!queue.empty()) {
    int state = queue.front();
    queue.pop_front();
    for (int next : nfa.eps[state]) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return std::vector<int>(seen.begin(), seen.end());
}

// Removes states that cannot reach acceptance and renumbers the remainder
// in breadth-first order from the start state.
FiniteControl finalize_dfa(std::vector<EventClass> alphabet,
                           const std::vector<std::vector<int>>& transitions,
                           const std::vector<bool>& accepting) {
  std::size_t n = transitions.size();
  std::size_t m = alphabet.size();

  std::vector<std::vector<int>> reverse(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t k = 0; k < m; ++k) {
      if (transitions[q][k] >= 0) {
        reverse[transitions[q][k]].push_back(static_cast<int>(q));
      }
    }
  }
  std::vector<bool> live(n, false);
  std::deque<int> queue;
  for (std::size_t q = 0; q < n; ++q) {
    if (accepting[q]) {
      live[q] = true;
      queue.push_back(static_cast<int>(q));
    }
  }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int prev : reverse[q]) {
      if (!live[prev]) {
        live[prev] = true;
        queue.push_back(prev);
      }
    }
  }

  FiniteControl control;
  control.alphabet = std::move(alphabet);
  if (n == 0 || !live[0]) {
    // Nothing is accepted; keep one inert start state so runs are defined.
    control.state_count = 1;
    control.accepting = {false};
    control.transitions.assign(m, -1);
    return control;
  }

  std::vector<int> renumber(n, -1);
  std::vector<int> order;
  renumber[0] = 0;
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int q = order[i];
    for (std::size_t k = 0; k < m; ++k) {
      int t = transitions[q][k];
      if (t >= 0 && live[t] && renumber[t] < 0) {
        renumber[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }

  control.state_count = order.size();
  control.accepting.resize(order.size());
  control.transitions.assign(order.size() * m, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int q = order[i];
    control.accepting[i] = accepting[q];
    for (std::size_t k = 0; k < m; ++k) {
      int t = transitions[q][k];
      control.transitions[i * m + k] = (t >= 0 && live[t]) ? renumber[t] : -1;
    }
  }
  return control;
}

FiniteControl compile_finite(const Grammar& grammar,
                             std::vector<EventClass> alphabet) {
  std::map<std::string, std::size_t> class_index;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    class_index[alphabet[i].name] = i;
  }
  Nfa nfa = build_nfa(grammar, class_index);
  std::size_t m = alphabet.size();

  std::map<std::vector<int>, int> subset_index;
  std::vector<std::vector<int>> transitions;
  std::vector<bool> accepting;
  std::vector<std::vector<int>> subsets;

  std::vector<int> start = eps_closure(nfa, {nfa.start});
  subset_index[start] = 0;
  subsets.push_back(start);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<int> subset = subsets[i];
    transitions.emplace_back(m, -1);
    accepting.push_back(std::binary_search(subset.begin(), subset.end(),
                                           nfa.accept));
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<int> targets;
      for (int q : subset) {
        auto it = nfa.moves[q].find(k);
        if (it != nfa.moves[q].end()) {
          targets.insert(targets.end(), it->second.begin(), it->second.end());
        }
      }
      if (targets.empty()) continue;
      std::vector<int> next = eps_closure(nfa, std::move(targets));
      auto [it, inserted] =
          subset_index.emplace(next, static_cast<int>(subsets.size()));
      if (inserted) subsets.push_back(next);
      transitions[i][k] = it->second;
    }
  }
  return finalize_dfa(std::move(alphabet), transitions, accepting);
}

PushdownControl compile_pushdown(const Grammar& grammar,
                                 std::vector<EventClass> alphabet,
                                 bool accept_by_empty_stack) {
  PushdownControl pda;
  pda.accept_by_empty_stack = accept_by_empty_stack;
  std::map<std::string, int> symbol_id;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    symbol_id[alphabet[i].name] = static_cast<int>(i);
  }
  pda.alphabet = std::move(alphabet);
  int next_id = static_cast<int>(pda.alphabet.size());
  auto nonterminal_id = [&](const std::string& name) {
    auto [it, inserted] = symbol_id.emplace(name, next_id);
    if (inserted) ++next_id;
    return it->second;
  };
  pda.start_symbol = nonterminal_id(grammar.start());
  for (const LabeledProduction& p : grammar.productions()) {
    PushdownControl::StackProduction sp;
    sp.lhs = nonterminal_id(p.lhs);
    for (const Symbol& s : p.rhs) {
      sp.rhs.push_back(s.kind == SymbolKind::kNonterminal
                           ? nonterminal_id(s.name)
                           : symbol_id.at(s.name));
    }
    pda.productions.push_back(std::move(sp));
  }
  return pda;
}

}  // namespace

bool EventClass::matches(const ProductionEvent& event) const {
  switch (kind) {
    case Kind::kExact:
      return event.label == label;
    case Kind::kParam:
      return event.label == label && event.parameter.has_value() &&
             *event.parameter == param;
    case Kind::kExactExcept:
      return event.label == label &&
             (!event.parameter.has_value() ||
              std::find(excluded_params.begin(), excluded_params.end(),
                        *event.parameter) == excluded_params.end());
    case Kind::kWildcard:
      return false;
  }
  return false;
}

std::size_t classify_event(const std::vector<EventClass>& alphabet,
                           const ProductionEvent& event) {
  std::size_t wildcard = alphabet.size();
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i].kind == EventClass::Kind::kWildcard) {
      wildcard = i;
    } else if (alphabet[i].matches(event)) {
      return i;
    }
  }
  if (wildcard < alphabet.size()) return wildcard;
  std::string what = "event '" + event.label;
  if (event.parameter) what += "(" + *event.parameter + ")";
  throw InvalidArgument(what +
                        "' matches no event class and the rule declares no "
                        "'other' class");
}

ControllingAutomaton compile_rule(const std::string& source) {
  RuleSpec spec = parse_rule_source(source);

  internal::GrammarTextOptions options;
  options.allow_star = true;
  options.restrict_terminals = true;
  for (const EventClass& klass : spec.classes) {
    options.terminal_names.insert(klass.name);
  }
  Grammar grammar =
      internal::parse_grammar_text(spec.grammar_source, options).grammar;

  ControllingAutomaton automaton;
  automaton.rule_id = spec.id;
  automaton.description = spec.description;
  if (grammar.is_right_linear()) {
    if (spec.accept_directive_seen && spec.accept_by_empty_stack) {
      throw SyntaxError(
          "accept = empty-stack requires a rule grammar that is not "
          "right-linear",
          0);
    }
    automaton.machine = compile_finite(grammar, spec.classes);
  } else {
    automaton.machine = compile_pushdown(grammar, spec.classes,
                                         spec.accept_by_empty_stack);
  }
  return automaton;
}

// ---------------------------------------------------------------------------
// Running.

ControlRunner::ControlRunner(const ControllingAutomaton& automaton)
    : automaton_(automaton) {
  if (automaton_.finite()) {
    const auto& control = std::get<FiniteControl>(automaton_.machine);
    state_ = control.state_count == 0 ? -1 : 0;
    if (state_ < 0) dead_ = true;
  } else {
    const auto& pda = std::get<PushdownControl>(automaton_.machine);
    configs_.push_back(PdaConfig{false, {pda.start_symbol}});
    pda_closure(configs_);
  }
}

void ControlRunner::pda_closure(std::vector<PdaConfig>& configs) const {
  const auto& pda = std::get<PushdownControl>(automaton_.machine);
  int class_count = static_cast<int>(pda.alphabet.size());
  std::set<PdaConfig> seen(configs.begin(), configs.end());
  std::deque<PdaConfig> queue(configs.begin(), configs.end());
  std::size_t work = 0;
  while (!queue.empty()) {
    if (++work > pda.config_budget) {
      throw BudgetError(BudgetError::Kind::kConfigurations,
                        "pushdown rule '" + automaton_.rule_id +
                            "' exceeded its configuration budget");
    }
    PdaConfig config = queue.front();
    queue.pop_front();
    if (config.accepted) continue;
    if (config.stack.empty()) {
      PdaConfig accept{true, {}};
      if (seen.insert(accept).second) queue.push_back(std::move(accept));
      continue;
    }
    int top = config.stack.back();
    if (top < class_count) continue;  // terminal on top: wait for input
    for (const PushdownControl::StackProduction& p : pda.productions) {
      if (p.lhs != top) continue;
      PdaConfig next{false, config.stack};
      next.stack.pop_back();
      next.stack.insert(next.stack.end(), p.rhs.rbegin(), p.rhs.rend());
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  configs.assign(seen.begin(), seen.end());
}

void ControlRunner::feed(const ProductionEvent& event) {
  std::size_t index = fed_++;
  if (dead_) return;
  if (automaton_.finite()) {
    const auto& control = std::get<FiniteControl>(automaton_.machine);
    std::size_t klass = classify_event(control.alphabet, event);
    state_ = control.next(state_, klass);
    if (state_ < 0) {
      dead_ = true;
      dead_index_ = index;
    }
    return;
  }
  const auto& pda = std::get<PushdownControl>(automaton_.machine);
  int klass = static_cast<int>(classify_event(pda.alphabet, event));
  std::vector<PdaConfig> next;
  for (const PdaConfig& config : configs_) {
    if (config.accepted || config.stack.empty()) continue;
    if (config.stack.back() != klass) continue;
    PdaConfig advanced{false, config.stack};
    advanced.stack.pop_back();
    next.push_back(std::move(advanced));
  }
  if (next.empty()) {
    dead_ = true;
    dead_index_ = index;
    configs_.clear();
    return;
  }
  pda_closure(next);
  configs_ = std::move(next);
}

ControlVerdict ControlRunner::finish() const {
  ControlVerdict verdict;
  if (dead_) {
    verdict.accepted = false;
    verdict.first_dead_index = dead_index_;
    return verdict;
  }
  if (automaton_.finite()) {
    const auto& control = std::get<FiniteControl>(automaton_.machine);
    verdict.accepted = control.accepting[state_];
  } else {
    const auto& pda = std::get<PushdownControl>(automaton_.machine);
    for (const PdaConfig& config : configs_) {
      if (pda.accept_by_empty_stack ? config.stack.empty() : config.accepted) {
        verdict.accepted = true;
        break;
      }
    }
  }
  verdict.first_dead_index = verdict.accepted ? 0 : fed_;
  return verdict;
}

ControlVerdict accepts(const ControllingAutomaton& automaton,
                       const std::vector<ProductionEvent>& events) {
  ControlRunner runner(automaton);
  for (const ProductionEvent& event : events) runner.feed(event);
  return runner.finish();
}

// ---------------------------------------------------------------------------
// Intersection of finite controls.

namespace {

// Builds the coarsest common refinement of the two alphabets: one class per
// named parameter value, a per-label remainder class when some side matches
// unlisted parameters, and a shared wildcard when both sides have one.
std::vector<EventClass> refine_alphabets(const std::vector<EventClass>& a,
                                         const std::vector<EventClass>& b) {
  std::map<std::string, std::set<std::string>> param_values;
  std::set<std::string> remainder_labels;
  bool wildcard_a = false;
  bool wildcard_b = false;
  auto absorb = [&](const std::vector<EventClass>& alphabet, bool& wildcard) {
    for (const EventClass& klass : alphabet) {
      switch (klass.kind) {
        case EventClass::Kind::kExact:
          param_values[klass.label];
          remainder_labels.insert(klass.label);
          break;
        case EventClass::Kind::kParam:
          param_values[klass.label].insert(klass.param);
          break;
        case EventClass::Kind::kExactExcept:
          remainder_labels.insert(klass.label);
          for (const std::string& v : klass.excluded_params) {
            param_values[klass.label].insert(v);
          }
          break;
        case EventClass::Kind::kWildcard:
          wildcard = true;
          break;
      }
    }
  };
  absorb(a, wildcard_a);
  absorb(b, wildcard_b);

  std::vector<EventClass> atoms;
  for (const auto& [label, values] : param_values) {
    for (const std::string& value : values) {
      EventClass atom;
      atom.kind = EventClass::Kind::kParam;
      atom.label = label;
      atom.param = value;
      atoms.push_back(std::move(atom));
    }
    if (remainder_labels.count(label)) {
      EventClass atom;
      atom.label = label;
      if (values.empty()) {
        atom.kind = EventClass::Kind::kExact;
      } else {
        atom.kind = EventClass::Kind::kExactExcept;
        atom.excluded_params.assign(values.begin(), values.end());
      }
      atoms.push_back(std::move(atom));
    }
  }
  if (wildcard_a && wildcard_b) {
    EventClass atom;
    atom.kind = EventClass::Kind::kWildcard;
    atoms.push_back(std::move(atom));
  }

  // Name the atoms: reuse a side's name for semantically identical classes,
  // otherwise synthesize, keeping names unique.
  std::set<std::string> taken;
  for (EventClass& atom : atoms) {
    std::string name;
    for (const std::vector<EventClass>* side : {&a, &b}) {
      for (const EventClass& klass : *side) {
        if (klass.kind == atom.kind && klass.label == atom.label &&
            klass.param == atom.param &&
            klass.excluded_params == atom.excluded_params) {
          name = klass.name;
          break;
        }
      }
      if (!name.empty()) break;
    }
    if (name.empty()) {
      switch (atom.kind) {
        case EventClass::Kind::kExact:
          name = atom.label;
          break;
        case EventClass::Kind::kParam:
          name = atom.label + "(" + atom.param + ")";
          break;
        case EventClass::Kind::kExactExcept:
          name = atom.label + "(other)";
          break;
        case EventClass::Kind::kWildcard:
          name = "other";
          break;
      }
    }
    while (!taken.insert(name).second) name += "'";
    atom.name = name;
  }
  return atoms;
}

// A concrete event guaranteed to lie in the atom (used to map atoms back to
// the operand alphabets).
ProductionEvent representative_event(const EventClass& atom,
                                     const std::vector<EventClass>& a,
                                     const std::vector<EventClass>& b) {
  if (atom.kind == EventClass::Kind::kParam) {
    return ProductionEvent{atom.label, atom.param, std::nullopt, std::nullopt};
  }
  if (atom.kind != EventClass::Kind::kWildcard) {
    // Exact / ExactExcept remainder: the parameterless event with this label
    // lies in the remainder by construction.
    return ProductionEvent{atom.label, std::nullopt, std::nullopt,
                           std::nullopt};
  }
  std::string label = "__none__";
  auto label_used = [&](const std::vector<EventClass>& alphabet) {
    for (const EventClass& klass : alphabet) {
      if (klass.kind != EventClass::Kind::kWildcard && klass.label == label) {
        return true;
      }
    }
    return false;
  };
  while (label_used(a) || label_used(b)) label += "_";
  return ProductionEvent{label, std::nullopt, std::nullopt, std::nullopt};
}

}  // namespace

ControllingAutomaton intersect(const ControllingAutomaton& a,
                               const ControllingAutomaton& b) {
  if (!a.finite() || !b.finite()) {
    throw InvalidArgument(
        "only finite controls can be intersected; run pushdown rules "
        "side by side instead");
  }
  const auto& fa = std::get<FiniteControl>(a.machine);
  const auto& fb = std::get<FiniteControl>(b.machine);

  std::vector<EventClass> atoms = refine_alphabets(fa.alphabet, fb.alphabet);
  std::vector<std::size_t> map_a(atoms.size());
  std::vector<std::size_t> map_b(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    ProductionEvent probe = representative_event(atoms[i], fa.alphabet,
                                                 fb.alphabet);
    map_a[i] = classify_event(fa.alphabet, probe);
    map_b[i] = classify_event(fb.alphabet, probe);
  }

  std::map<std::pair<int, int>, int> pair_index;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> transitions;
  std::vector<bool> accepting;
  pair_index[{0, 0}] = 0;
  pairs.push_back({0, 0});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [qa, qb] = pairs[i];
    transitions.emplace_back(atoms.size(), -1);
    accepting.push_back(fa.accepting[qa] && fb.accepting[qb]);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      int ta = fa.next(qa, map_a[k]);
      int tb = fb.next(qb, map_b[k]);
      if (ta < 0 || tb < 0) continue;
      auto [it, inserted] = pair_index.emplace(std::make_pair(ta, tb),
                                               static_cast<int>(pairs.size()));
      if (inserted) pairs.push_back({ta, tb});
      transitions[i][k] = it->second;
    }
  }

  ControllingAutomaton product;
  product.rule_id = a.rule_id + "&" + b.rule_id;
  if (!a.description.empty() && !b.description.empty()) {
    product.description = a.description + " AND " + b.description;
  } else {
    product.description = a.description + b.description;
  }
  product.machine = finalize_dfa(std::move(atoms), transitions, accepting);
  return product;
}

}  // namespace csys
