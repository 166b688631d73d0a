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

#include "csys/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "csys/grammar_text.hpp"

namespace csys {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == '.' || static_cast<unsigned char>(c) >= 0x80;
}

// One raw right-hand-side item as written in the source.
struct RhsItem {
  std::string text;
  bool quoted = false;
  bool starred = false;
  std::optional<std::string> parameter;  // from name(param)
};

struct RawProduction {
  std::string label;
  std::string lhs;
  std::vector<RhsItem> rhs;  // empty only for epsilon bodies
  std::size_t line = 0;
};

// Splits a production line into label, lhs and rhs items.  Returns false for
// the start directive (handled by the caller).
struct LineScanner {
  const std::string& text;
  std::size_t line_no;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, line_no);
  }

  std::string word() {
    skip_ws();
    std::size_t begin = pos;
    while (pos < text.size() && is_word_char(text[pos])) ++pos;
    if (pos == begin) fail("expected a name");
    return text.substr(begin, pos - begin);
  }

  // Reads one rhs item: quoted literal, epsilon keyword, or a name with an
  // optional (param) declaration and optional trailing '*'.
  RhsItem item(bool allow_star) {
    skip_ws();
    RhsItem out;
    char c = text[pos];
    if (c == '\'' || c == '"') {
      std::size_t close = text.find(c, pos + 1);
      if (close == std::string::npos) fail("unterminated quoted terminal");
      out.text = text.substr(pos + 1, close - pos - 1);
      out.quoted = true;
      pos = close + 1;
    } else {
      out.text = word();
      if (pos < text.size() && text[pos] == '(') {
        std::size_t close = text.find(')', pos + 1);
        if (close == std::string::npos) fail("unterminated parameter list");
        std::string param = text.substr(pos + 1, close - pos - 1);
        if (param.empty()) fail("empty parameter name");
        out.parameter = param;
        pos = close + 1;
      }
    }
    if (pos < text.size() && text[pos] == '*') {
      if (!allow_star) fail("'*' repetition is not allowed here");
      out.starred = true;
      ++pos;
    }
    return out;
  }
};

bool is_epsilon(const RhsItem& item) {
  return !item.quoted && !item.parameter &&
         (item.text == "eps" || item.text == "ε");
}

}  // namespace

namespace internal {

ParsedGrammarText parse_grammar_text(const std::string& source,
                                     const GrammarTextOptions& opts) {
  std::vector<RawProduction> raw;
  std::optional<std::string> start;
  std::map<std::string, std::size_t> label_lines;
  std::map<std::string, std::string> param_decls;  // terminal -> formal name

  std::istringstream in(source);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    LineScanner scan{line, line_no};
    if (scan.at_end()) continue;

    std::string label = scan.word();
    scan.skip_ws();
    if (scan.pos >= line.size() || line[scan.pos] != ':') {
      scan.fail("expected ':' after production label");
    }
    ++scan.pos;

    bool has_arrow = line.find("->") != std::string::npos ||
                     line.find("::=") != std::string::npos ||
                     line.find("→") != std::string::npos;
    if (label == "start" && !has_arrow) {
      if (start) scan.fail("duplicate start directive");
      start = scan.word();
      if (!scan.at_end()) scan.fail("trailing text after start directive");
      continue;
    }

    if (auto [it, inserted] = label_lines.emplace(label, line_no); !inserted) {
      scan.fail("duplicate production label '" + label + "' (first on line " +
                std::to_string(it->second) + ")");
    }

    RawProduction prod;
    prod.label = label;
    prod.line = line_no;
    prod.lhs = scan.word();
    scan.skip_ws();
    if (line.compare(scan.pos, 2, "->") == 0) {
      scan.pos += 2;
    } else if (line.compare(scan.pos, 3, "::=") == 0) {
      scan.pos += 3;
    } else if (line.compare(scan.pos, 3, "→") == 0) {
      scan.pos += 3;
    } else {
      scan.fail("expected '->' after the left-hand side");
    }
    while (!scan.at_end()) {
      RhsItem item = scan.item(opts.allow_star);
      if (is_epsilon(item)) {
        if (!prod.rhs.empty() || !scan.at_end()) {
          scan.fail("epsilon must be the entire body");
        }
        break;
      }
      if (item.parameter) {
        auto [it, inserted] = param_decls.emplace(item.text, *item.parameter);
        if (!inserted && it->second != *item.parameter) {
          scan.fail("conflicting parameter name for terminal '" + item.text +
                    "'");
        }
      }
      prod.rhs.push_back(std::move(item));
    }
    raw.push_back(std::move(prod));
  }

  if (raw.empty()) {
    throw SyntaxError(
        start ? "start symbol '" + *start + "' is underivable: no productions"
              : "no productions",
        line_no);
  }

  // Lhs names are nonterminals everywhere; everything else is classified by
  // spelling unless the caller pinned it down.
  std::set<std::string> lhs_names;
  for (const RawProduction& p : raw) lhs_names.insert(p.lhs);

  auto classify = [&](const RhsItem& item,
                      std::size_t line_of_use) -> Symbol {
    const std::string& name = item.text;
    if (opts.terminal_names.count(name) != 0) {
      return Symbol{SymbolKind::kTerminal, name, std::nullopt};
    }
    if (param_decls.count(name) != 0) {
      return Symbol{SymbolKind::kParamTerminal, name, param_decls.at(name)};
    }
    bool upper_initial =
        !item.quoted && !name.empty() &&
        std::isupper(static_cast<unsigned char>(name.front())) != 0;
    if (upper_initial) {
      return Symbol{SymbolKind::kNonterminal, name, std::nullopt};
    }
    if (opts.restrict_terminals) {
      throw SyntaxError("undeclared event class '" + name + "'", line_of_use);
    }
    return Symbol{SymbolKind::kTerminal, name, std::nullopt};
  };

  std::vector<LabeledProduction> productions;
  std::set<std::string> starred;  // nonterminal names like "X*"
  std::map<std::string, Symbol> star_base;

  for (const RawProduction& p : raw) {
    if (opts.terminal_names.count(p.lhs) != 0 ||
        param_decls.count(p.lhs) != 0 || p.lhs.empty() ||
        std::isupper(static_cast<unsigned char>(p.lhs.front())) == 0) {
      throw SyntaxError("left-hand side '" + p.lhs + "' is not a nonterminal",
                        p.line);
    }
    LabeledProduction out;
    out.label = p.label;
    out.lhs = p.lhs;
    for (const RhsItem& item : p.rhs) {
      Symbol sym = classify(item, p.line);
      if (item.starred) {
        std::string star_name = sym.name + "*";
        if (starred.insert(star_name).second) star_base.emplace(star_name, sym);
        sym = Symbol{SymbolKind::kNonterminal, star_name, std::nullopt};
      }
      out.rhs.push_back(std::move(sym));
    }
    productions.push_back(std::move(out));
  }

  // X* expands to a fresh nonterminal with X* -> eps | X X*.
  for (const std::string& star_name : starred) {
    lhs_names.insert(star_name);
    productions.push_back({star_name + "_1", star_name, {}});
    productions.push_back(
        {star_name + "_2",
         star_name,
         {star_base.at(star_name),
          Symbol{SymbolKind::kNonterminal, star_name, std::nullopt}}});
  }

  for (const RawProduction& p : raw) {
    for (const RhsItem& item : p.rhs) {
      Symbol sym = classify(item, p.line);
      if (sym.kind == SymbolKind::kNonterminal && !item.starred &&
          lhs_names.count(sym.name) == 0) {
        throw SyntaxError("undeclared symbol '" + sym.name +
                              "': no production derives it",
                          p.line);
      }
    }
  }

  std::string start_name = start.value_or(productions.front().lhs);
  if (lhs_names.count(start_name) == 0) {
    throw SyntaxError("start symbol '" + start_name +
                          "' is underivable: no productions",
                      1);
  }

  return ParsedGrammarText{
      Grammar(std::move(productions), std::move(start_name))};
}

}  // namespace internal

Grammar compile_grammar(const std::string& source) {
  return internal::parse_grammar_text(source, {}).grammar;
}

Grammar::Grammar(std::vector<LabeledProduction> productions, std::string start)
    : productions_(std::move(productions)), start_(std::move(start)) {
  if (productions_.empty()) {
    throw InvalidArgument("grammar has no productions");
  }
  for (std::size_t i = 0; i < productions_.size(); ++i) {
    const LabeledProduction& p = productions_[i];
    if (!by_label_.emplace(p.label, i).second) {
      throw InvalidArgument("duplicate production label '" + p.label + "'");
    }
    nonterminals_.insert(p.lhs);
  }
  for (const LabeledProduction& p : productions_) {
    for (const Symbol& s : p.rhs) {
      switch (s.kind) {
        case SymbolKind::kNonterminal:
          if (by_label_.count(s.name) == 0 && nonterminals_.count(s.name) == 0) {
            throw InvalidArgument("undeclared symbol '" + s.name + "'");
          }
          nonterminals_.insert(s.name);
          break;
        case SymbolKind::kTerminal:
          terminals_.insert(s.name);
          break;
        case SymbolKind::kParamTerminal:
          param_terminals_.insert(s.name);
          break;
      }
    }
  }
  for (const std::string& t : terminals_) {
    if (nonterminals_.count(t) != 0) {
      throw InvalidArgument("symbol '" + t +
                            "' is used both as terminal and nonterminal");
    }
  }
  for (const std::string& t : param_terminals_) {
    if (nonterminals_.count(t) != 0 || terminals_.count(t) != 0 ||
        by_label_.count(t) != 0) {
      throw InvalidArgument("parameterized terminal '" + t +
                            "' collides with another symbol or label");
    }
  }
  if (nonterminals_.count(start_) == 0) {
    throw InvalidArgument("start symbol '" + start_ +
                          "' is underivable: no productions");
  }
}

const LabeledProduction* Grammar::find(const std::string& label) const {
  auto it = by_label_.find(label);
  return it == by_label_.end() ? nullptr : &productions_[it->second];
}

std::set<std::string> Grammar::event_labels() const {
  std::set<std::string> out = param_terminals_;
  for (const LabeledProduction& p : productions_) out.insert(p.label);
  return out;
}

bool Grammar::is_right_linear() const {
  for (const LabeledProduction& p : productions_) {
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      if (p.rhs[i].kind == SymbolKind::kNonterminal &&
          i + 1 != p.rhs.size()) {
        return false;
      }
    }
  }
  return true;
}

bool SententialForm::complete() const {
  return std::none_of(symbols.begin(), symbols.end(), [](const Symbol& s) {
    return s.kind == SymbolKind::kNonterminal;
  });
}

std::string SententialForm::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!out.empty()) out += ' ';
    const Symbol& s = symbols[i];
    switch (s.kind) {
      case SymbolKind::kNonterminal:
        out += '[' + s.name + ']';
        break;
      case SymbolKind::kTerminal:
        out += s.name;
        break;
      case SymbolKind::kParamTerminal:
        out += s.name + '(' + bindings[i].value_or("?") + ')';
        break;
    }
  }
  return out;
}

SententialForm leftmost_derive(const Grammar& g,
                               const std::vector<ProductionEvent>& events) {
  SententialForm form;
  form.symbols.push_back(
      Symbol{SymbolKind::kNonterminal, g.start(), std::nullopt});
  form.bindings.push_back(std::nullopt);

  std::size_t cursor = 0;  // frontier: everything before it is fixed
  auto fail = [](std::size_t index, const std::string& what) -> void {
    throw InvalidArgument("event " + std::to_string(index) + ": " + what);
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const ProductionEvent& ev = events[i];
    while (cursor < form.symbols.size() &&
           (form.symbols[cursor].kind == SymbolKind::kTerminal ||
            (form.symbols[cursor].kind == SymbolKind::kParamTerminal &&
             form.bindings[cursor].has_value()))) {
      ++cursor;
    }
    if (cursor == form.symbols.size()) {
      fail(i, "no nonterminal remains in the sentential form");
    }
    const Symbol& at = form.symbols[cursor];
    if (at.kind == SymbolKind::kParamTerminal) {
      if (ev.label != at.name) {
        fail(i, "expected a binding for parameterized terminal '" + at.name +
                    "', got '" + ev.label + "'");
      }
      form.bindings[cursor] = ev.parameter.value_or("");
      continue;
    }
    const LabeledProduction* prod = g.find(ev.label);
    if (prod == nullptr) {
      fail(i, "unknown production label '" + ev.label + "'");
    }
    if (prod->lhs != at.name) {
      fail(i, "label '" + ev.label + "' rewrites '" + prod->lhs +
                  "' but the leftmost nonterminal is '" + at.name + "'");
    }
    form.symbols.erase(form.symbols.begin() + cursor);
    form.bindings.erase(form.bindings.begin() + cursor);
    form.symbols.insert(form.symbols.begin() + cursor, prod->rhs.begin(),
                        prod->rhs.end());
    form.bindings.insert(form.bindings.begin() + cursor, prod->rhs.size(),
                         std::nullopt);
  }
  return form;
}

}  // namespace csys
