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

#include "csys/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "csys/xmi.hpp"

namespace csys {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kError: return "error";
  }
  return "error";
}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t bol = 0;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      bol = i + 1;
    }
  }
  return {line, offset - bol + 1};
}

std::string event_display(const ProductionEvent& event) {
  std::string out = event.label;
  if (event.parameter) out += "(" + *event.parameter + ")";
  return out;
}

std::string position_note(const std::string& text, std::size_t offset) {
  auto [line, column] = line_column(text, offset);
  return " at line " + std::to_string(line) + ", column " +
         std::to_string(column);
}

void run_checks(Report& report, const std::string& text,
                const std::vector<ControllingAutomaton>& rules,
                const CheckOptions& options) {
  std::vector<Token> tokens = tokenize_xmi(text);
  XmiParse parse = parse_xmi(tokens);
  report.warnings.insert(report.warnings.end(), parse.warnings.begin(),
                         parse.warnings.end());

  // The checked trace is normally the document's own; when normalization
  // changes the tree the normalized serialization is re-parsed instead, and
  // the resulting spans no longer point into `text`.
  DerivationTrace checked = std::move(parse.trace);
  bool spans_in_text = true;
  if (options.normalize) {
    ModelElement normalized =
        normalize_activity_order(parse.root, &report.warnings);
    if (serialize(normalized) != serialize(parse.root)) {
      report.warnings.push_back(
          "element order was normalized before checking; violation spans "
          "refer to enclosing elements of the original document");
      checked = parse_xmi_text(serialize(normalized)).trace;
      spans_in_text = false;
    }
  }
  report.stats.events = checked.events.size();
  if (options.collect_trace) {
    report.trace.reserve(checked.events.size());
    for (const ProductionEvent& event : checked.events) {
      report.trace.push_back(event_display(event));
    }
  }

  ElementIndex index(parse.root);

  // Individual runners attribute violations to their rules; with several
  // finite rules the verdict additionally goes through their product, whose
  // single pass is what a combined deployment would use.
  std::vector<ControlRunner> per_rule;
  per_rule.reserve(rules.size());
  for (const ControllingAutomaton& rule : rules) per_rule.emplace_back(rule);

  std::optional<ControllingAutomaton> product;
  std::vector<const ControllingAutomaton*> finite_rules;
  for (const ControllingAutomaton& rule : rules) {
    if (rule.finite()) finite_rules.push_back(&rule);
  }
  if (finite_rules.size() >= 2) {
    ControllingAutomaton combined = *finite_rules[0];
    for (std::size_t i = 1; i < finite_rules.size(); ++i) {
      combined = intersect(combined, *finite_rules[i]);
    }
    product.emplace(std::move(combined));
  }
  std::optional<ControlRunner> product_runner;
  if (product) product_runner.emplace(*product);

  for (const ProductionEvent& event : checked.events) {
    for (ControlRunner& runner : per_rule) runner.feed(event);
    if (product_runner) product_runner->feed(event);
  }

  bool fail = product_runner && !product_runner->finish().accepted;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    ControlVerdict verdict = per_rule[r].finish();
    if (verdict.accepted) continue;
    fail = true;

    Violation violation;
    violation.rule_id = rules[r].rule_id;
    violation.event_index = verdict.first_dead_index;
    const ProductionEvent* event =
        verdict.first_dead_index < checked.events.size()
            ? &checked.events[verdict.first_dead_index]
            : nullptr;
    std::string detail =
        event ? "rejected at event " +
                    std::to_string(verdict.first_dead_index) + " (" +
                    event_display(*event) + ")"
              : "trace ended in a non-accepting configuration";
    violation.message = rules[r].description.empty()
                            ? detail
                            : rules[r].description + " — " + detail;
    if (event) {
      violation.element_id = event->element_id;
      if (event->element_id) {
        if (const ModelElement* element = index.by_id(*event->element_id)) {
          violation.element_name = index.display_name(*element);
          if (!spans_in_text || !event->span) {
            violation.byte_span = element->span;
          }
        }
      }
      if (spans_in_text && event->span) violation.byte_span = *event->span;
    }
    auto [line, column] = line_column(text, violation.byte_span.start);
    violation.line = line;
    violation.column = column;
    report.violations.push_back(std::move(violation));
  }

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return a.event_index != b.event_index
                                ? a.event_index < b.event_index
                                : a.rule_id < b.rule_id;
                   });
  report.verdict = fail ? Verdict::kFail : Verdict::kPass;
}

}  // namespace

Report check_model_text(const std::string& file_label,
                        const std::string& text,
                        const std::vector<ControllingAutomaton>& rules,
                        const CheckOptions& options) {
  Report report;
  report.file = file_label;
  report.stats.rules = rules.size();
  auto begin = std::chrono::steady_clock::now();
  try {
    run_checks(report, text, rules, options);
  } catch (const XmlError& e) {
    report.verdict = Verdict::kError;
    report.error = std::string(e.what()) + position_note(text, e.offset());
  } catch (const BudgetError& e) {
    report.verdict = Verdict::kError;
    report.error = e.what();
  } catch (const InvalidArgument& e) {
    report.verdict = Verdict::kError;
    report.error = e.what();
  }
  report.stats.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - begin)
          .count();
  return report;
}

Report check_model(const std::string& path,
                   const std::vector<ControllingAutomaton>& rules,
                   const CheckOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Report report;
    report.file = path;
    report.stats.rules = rules.size();
    report.verdict = Verdict::kError;
    report.error = "cannot read file";
    return report;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return check_model_text(path, buffer.str(), rules, options);
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << report.file << ": " << to_string(report.verdict);
  if (report.error) out << " (" << *report.error << ")";
  out << "\n";
  for (const std::string& warning : report.warnings) {
    out << "  warning: " << warning << "\n";
  }
  for (const Violation& v : report.violations) {
    out << "  " << report.file << ":" << v.line << ":" << v.column << ": ["
        << v.rule_id << "] " << v.message;
    if (v.element_name) {
      out << " [element: " << *v.element_name;
      if (v.element_id) out << " (" << *v.element_id << ")";
      out << "]";
    } else if (v.element_id) {
      out << " [element id: " << *v.element_id << "]";
    }
    out << "\n";
  }
  if (!report.trace.empty()) {
    out << "  trace:";
    for (const std::string& event : report.trace) out << " " << event;
    out << "\n";
  }
  out << "  " << report.stats.events << " events, " << report.stats.rules
      << " rules, " << report.stats.elapsed_ms << " ms\n";
  return out.str();
}

namespace {

nlohmann::ordered_json report_json(const Report& report) {
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const Violation& v : report.violations) {
    nlohmann::ordered_json entry;
    entry["rule_id"] = v.rule_id;
    entry["message"] = v.message;
    entry["event_index"] = v.event_index;
    entry["byte_span"] = {{"start", v.byte_span.start},
                          {"end", v.byte_span.end}};
    entry["line"] = v.line;
    entry["column"] = v.column;
    if (v.element_id) {
      entry["element_id"] = *v.element_id;
    } else {
      entry["element_id"] = nullptr;
    }
    if (v.element_name) {
      entry["element_name"] = *v.element_name;
    } else {
      entry["element_name"] = nullptr;
    }
    violations.push_back(std::move(entry));
  }
  nlohmann::ordered_json out;
  out["file"] = report.file;
  out["verdict"] = to_string(report.verdict);
  if (report.error) out["error"] = *report.error;
  out["violations"] = std::move(violations);
  out["stats"] = {{"events", report.stats.events},
                  {"rules", report.stats.rules},
                  {"elapsed_ms", report.stats.elapsed_ms}};
  return out;
}

}  // namespace

std::string render_structured(const Report& report) {
  return report_json(report).dump(2) + "\n";
}

std::string render_structured(const std::vector<Report>& reports) {
  if (reports.size() == 1) return render_structured(reports.front());
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Report& report : reports) out.push_back(report_json(report));
  return out.dump(2) + "\n";
}

}  // namespace csys
