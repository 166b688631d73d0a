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

#ifndef CSYS_ERRORS_HPP_
#define CSYS_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csys {

// Half-open byte range [start, end) into some source text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
  bool contains(const SourceSpan& inner) const {
    return start <= inner.start && inner.end <= end;
  }
};

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed grammar or rule source. `line` is 1-based within the source
// text that was being compiled.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Malformed XML/XMI input. `offset` is a byte offset into the document.
class XmlError : public Error {
 public:
  XmlError(const std::string& message, std::size_t offset)
      : Error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A bounded search exceeded its budget.  Distinct from non-membership:
// callers must not interpret a budget overflow as a negative answer.
class BudgetError : public Error {
 public:
  enum class Kind {
    kTraces,          // too many leftmost derivations for one input
    kConfigurations,  // pushdown configuration set exploded
  };

  BudgetError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A request that cannot be satisfied regardless of input state, e.g. an
// unknown production label or an out-of-range rule parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace csys

#endif  // CSYS_ERRORS_HPP_
