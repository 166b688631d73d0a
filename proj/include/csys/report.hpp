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
// Model checking against controlling automata, and rendering of the
// results as human-readable text or a deterministic structured report.

#ifndef CSYS_REPORT_HPP_
#define CSYS_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csys/control.hpp"
#include "csys/errors.hpp"

namespace csys {

struct Violation {
  std::string rule_id;
  std::string message;
  std::size_t event_index = 0;  // into the checked trace
  SourceSpan byte_span;         // within the source document
  std::size_t line = 0;         // 1-based
  std::size_t column = 0;       // 1-based
  std::optional<std::string> element_id;
  std::optional<std::string> element_name;
};

enum class Verdict { kPass, kFail, kError };
std::string to_string(Verdict verdict);

struct ReportStats {
  std::size_t events = 0;
  std::size_t rules = 0;
  std::int64_t elapsed_ms = 0;
};

struct Report {
  std::string file;
  Verdict verdict = Verdict::kPass;
  std::vector<Violation> violations;  // ordered by event_index
  ReportStats stats;
  // Extra diagnostics, rendered in text output only.
  std::vector<std::string> warnings;
  std::optional<std::string> error;  // set iff verdict == kError
  std::vector<std::string> trace;    // filled when CheckOptions::collect_trace
};

struct CheckOptions {
  // Reorder fork/join and incoming/outgoing children before checking.
  bool normalize = true;
  // Record the checked event sequence in Report::trace.
  bool collect_trace = false;
};

// Checks one document: tokenize, build the tree, normalize (optionally),
// derive the trace, and stream it through all rules.  When two or more
// finite rules are given their product decides the verdict while each rule
// is still run individually to attribute violations.  Processing problems
// (unreadable file, malformed or underivable document, budget overflows)
// yield verdict kError rather than throwing.
Report check_model(const std::string& path,
                   const std::vector<ControllingAutomaton>& rules,
                   const CheckOptions& options = {});

// Same, for in-memory documents; `file_label` only names the report.
Report check_model_text(const std::string& file_label,
                        const std::string& text,
                        const std::vector<ControllingAutomaton>& rules,
                        const CheckOptions& options = {});

// Human-readable rendering, one block per report.
std::string render_text(const Report& report);

// Structured rendering: a JSON object with fields file, verdict,
// violations, stats.  Deterministic except for stats.elapsed_ms.
std::string render_structured(const Report& report);
std::string render_structured(const std::vector<Report>& reports);

}  // namespace csys

#endif  // CSYS_REPORT_HPP_
