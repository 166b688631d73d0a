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
// XMI front end: tokenizes XMI-style XML, builds an element tree, and
// parses the token stream against the UML/XMI document grammar to obtain a
// derivation trace whose events carry source spans and element anchors.

#ifndef CSYS_XMI_HPP_
#define CSYS_XMI_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csys/grammar.hpp"
#include "csys/parser.hpp"

namespace csys {

// Stored in Token::klass by tokenize_xmi.
enum class XmiTokenKind : int {
  kAngleOpen = 1,  // "<"
  kAngleClose,     // ">"
  kSlashClose,     // "/>"
  kName,           // element or attribute name (verbatim, prefix included)
  kQuotedValue,    // attribute value, quotes stripped and entities decoded
  kLiteral,        // "</" or element text content
};

// Produces the token sequence of one document.  The XML prolog, comments,
// insignificant whitespace, and '=' are dropped; quotes are absorbed into
// their value token's span.  Throws XmlError with a byte offset.
std::vector<Token> tokenize_xmi(const std::string& document);

struct ModelElement {
  struct Attribute {
    std::string name;
    std::string value;  // entity-decoded
    SourceSpan name_span;
    SourceSpan value_span;
  };

  std::string qname;
  std::optional<std::string> xmi_type;  // verbatim, e.g. "uml:Class"
  std::optional<std::string> xmi_id;
  std::vector<Attribute> attributes;  // all attributes, document order
  std::vector<ModelElement> children;
  std::optional<std::string> text;  // value-element content
  SourceSpan span;
  bool self_closing = false;

  const Attribute* find_attribute(const std::string& name) const;
};

struct XmiParse {
  ModelElement root;
  DerivationTrace trace;
  std::vector<std::string> warnings;
};

// The document grammar the toolkit checks against.  The same text ships as
// grammars/uml-xmi.grammar for reference.
const std::string& xmi_document_grammar_source();
const Grammar& xmi_document_grammar();

// Terminal matcher binding the grammar's structural terminal classes to
// XMI tokens.  `ids` is the set of xmi:id values of the document, used to
// tell reference values from plain ones.
TerminalMatcher make_xmi_matcher(std::vector<std::string> ids);

// Builds the element tree, reorders each tag's attributes to the grammar's
// canonical order (type, identity, features) keeping original spans, and
// parses.  Every trace event carries the xmi:id of its innermost enclosing
// identified element.  Throws XmlError when the document is malformed or
// not in the document language.
XmiParse parse_xmi(const std::vector<Token>& tokens);
XmiParse parse_xmi_text(const std::string& document);

// Reorders activity children so each fork node precedes its paired join
// node (i-th fork with i-th join, document order), and node children so
// incoming references precede outgoing ones.  Identity when the order is
// already valid; idempotent.  Count mismatches append to `warnings`.
ModelElement normalize_activity_order(const ModelElement& tree,
                                      std::vector<std::string>* warnings =
                                          nullptr);

// Canonical text form; re-parsing it yields the same trace shape (spans
// aside).  Attribute order, self-closing flags, and text are preserved.
std::string serialize(const ModelElement& tree);

// Resolves ids and parents against one tree (which must outlive the index).
class ElementIndex {
 public:
  explicit ElementIndex(const ModelElement& root);

  const ModelElement* by_id(const std::string& id) const;
  const ModelElement* parent(const ModelElement& element) const;
  // The element's own name attribute, or the nearest named ancestor's.
  std::optional<std::string> display_name(const ModelElement& element) const;

 private:
  void index(const ModelElement& element, const ModelElement* parent);

  std::map<std::string, const ModelElement*> by_id_;
  std::map<const ModelElement*, const ModelElement*> parents_;
};

}  // namespace csys

#endif  // CSYS_XMI_HPP_
