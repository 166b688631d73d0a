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

#include "csys/xmi.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>
#include <utility>

#include "csys/errors.hpp"

namespace csys {

// ---------------------------------------------------------------------------
// Document grammar.

const std::string& xmi_document_grammar_source() {
  static const std::string source = R"grammar(# Grammar of XMI documents as exported for UML models.
#
# Terminal classes are structural; the XMI tokenizer/matcher decides
# membership per token:
#   "<" ">" "/>" "</"   tag punctuation
#   2k(xmiName)         qualified name (element name or xmi:type value);
#                       binds the local name with a "uml:" prefix stripped
#   id                  quoted identity value
#   value               quoted non-reference value, or element text content
#   refs                quoted value whose whitespace-separated parts are
#                       all document ids or URI references
#   refId               quoted single reference id (no whitespace)
#   uriReference        quoted URI (contains "://" or "#")
#   attrName            feature attribute name: anything except xmi:id,
#                       xmi:type, xmi:idref, href, nil, or a name whose
#                       local part is "id"
#   xmiIdAttribName     identity attribute name other than "xmi:id" whose
#                       local part is "id"
#   "xmi:id" "xmi:type" "xmi:idref" "href" "nil" "true"   literal tokens

start: XMIObjectElement

3_1:  XMIElements -> XMIElement
3_2:  XMIElements -> XMIElement XMIElements

2_1:  XMIElement -> XMIObjectElement
2_2:  XMIElement -> XMIValueElement
2_3:  XMIElement -> XMIReferenceElement

2a_1: XMIObjectElement -> "<" 2k(xmiName) XMIAttributes "/>"
2a_2: XMIObjectElement -> "<" 2k XMIAttributes ">" XMIElements "</" 2k ">"

2b_1: XMIValueElement -> "<" 2k ">" value "</" 2k ">"
2b_2: XMIValueElement -> "<" 2k "nil" "true" "/>"

2c_1: XMIReferenceElement -> "<" 2k LinkAttribs "/>"
2c_2: XMIReferenceElement -> "<" 2k TypeAttrib LinkAttribs "/>"

2d_1: XMIAttributes -> TypeAttrib IdentityAttribs FeatureAttribs
2d_2: XMIAttributes -> IdentityAttribs FeatureAttribs
2d_3: XMIAttributes -> TypeAttrib IdentityAttribs
2d_4: XMIAttributes -> IdentityAttribs

2e:   IdentityAttribs -> IdAttribName id

2f_1: IdAttribName -> "xmi:id"
2f_2: IdAttribName -> xmiIdAttribName

2g:   TypeAttrib -> "xmi:type" 2k

3h_1: FeatureAttribs -> FeatureAttrib
3h_2: FeatureAttribs -> FeatureAttrib FeatureAttribs

2h_1: FeatureAttrib -> XMIValueAttribute
2h_2: FeatureAttrib -> XMIReferenceAttribute

2i:   XMIValueAttribute -> attrName value

2j:   XMIReferenceAttribute -> attrName refs

2l_1: LinkAttribs -> "xmi:idref" refId
2l_2: LinkAttribs -> Link

2m:   Link -> "href" URIref

2n:   URIref -> uriReference
)grammar";
  return source;
}

const Grammar& xmi_document_grammar() {
  static const Grammar grammar = compile_grammar(xmi_document_grammar_source());
  return grammar;
}

// ---------------------------------------------------------------------------
// Tokenizer.

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == '.' || c == '-' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::string decode_entities(const std::string& raw, std::size_t offset) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    std::size_t semi = raw.find(';', i);
    if (semi == std::string::npos || semi - i > 6) {
      throw XmlError("unterminated entity reference", offset + i);
    }
    std::string name = raw.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else {
      throw XmlError("unknown entity '&" + name + ";'", offset + i);
    }
    i = semi;
  }
  return out;
}

std::string encode_entities(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

int klass(XmiTokenKind kind) { return static_cast<int>(kind); }

}  // namespace

std::vector<Token> tokenize_xmi(const std::string& document) {
  std::vector<Token> out;
  std::size_t pos = 0;
  const std::size_t n = document.size();

  auto skip_ws = [&] {
    while (pos < n && std::isspace(static_cast<unsigned char>(document[pos])))
      ++pos;
  };
  auto read_name = [&](const char* what) {
    if (pos >= n || !is_name_start(document[pos])) {
      throw XmlError(std::string("expected ") + what, pos);
    }
    std::size_t begin = pos;
    while (pos < n && is_name_char(document[pos])) ++pos;
    out.push_back(Token{document.substr(begin, pos - begin),
                        SourceSpan{begin, pos}, klass(XmiTokenKind::kName)});
  };

  while (pos < n) {
    if (std::isspace(static_cast<unsigned char>(document[pos]))) {
      ++pos;
      continue;
    }
    if (document[pos] != '<') {
      // Text content: up to the next tag, outer whitespace dropped.
      std::size_t begin = pos;
      std::size_t lt = document.find('<', pos);
      if (lt == std::string::npos) lt = n;
      std::size_t end = lt;
      while (end > begin &&
             std::isspace(static_cast<unsigned char>(document[end - 1]))) {
        --end;
      }
      out.push_back(Token{decode_entities(document.substr(begin, end - begin),
                                          begin),
                          SourceSpan{begin, end},
                          klass(XmiTokenKind::kLiteral)});
      pos = lt;
      continue;
    }
    if (document.compare(pos, 2, "<?") == 0) {
      std::size_t end = document.find("?>", pos);
      if (end == std::string::npos) {
        throw XmlError("unterminated processing instruction", pos);
      }
      pos = end + 2;
      continue;
    }
    if (document.compare(pos, 4, "<!--") == 0) {
      std::size_t end = document.find("-->", pos);
      if (end == std::string::npos) {
        throw XmlError("unterminated comment", pos);
      }
      pos = end + 3;
      continue;
    }
    if (document.compare(pos, 2, "</") == 0) {
      out.push_back(
          Token{"</", SourceSpan{pos, pos + 2}, klass(XmiTokenKind::kLiteral)});
      pos += 2;
      read_name("element name after '</'");
      skip_ws();
      if (pos >= n || document[pos] != '>') {
        throw XmlError("expected '>' to finish the closing tag", pos);
      }
      out.push_back(Token{">", SourceSpan{pos, pos + 1},
                          klass(XmiTokenKind::kAngleClose)});
      ++pos;
      continue;
    }

    // Opening tag.
    out.push_back(
        Token{"<", SourceSpan{pos, pos + 1}, klass(XmiTokenKind::kAngleOpen)});
    ++pos;
    read_name("element name after '<'");
    for (;;) {
      skip_ws();
      if (pos >= n) throw XmlError("unterminated tag", pos);
      if (document[pos] == '>') {
        out.push_back(Token{">", SourceSpan{pos, pos + 1},
                            klass(XmiTokenKind::kAngleClose)});
        ++pos;
        break;
      }
      if (document.compare(pos, 2, "/>") == 0) {
        out.push_back(Token{"/>", SourceSpan{pos, pos + 2},
                            klass(XmiTokenKind::kSlashClose)});
        pos += 2;
        break;
      }
      read_name("attribute name");
      skip_ws();
      if (pos >= n || document[pos] != '=') {
        throw XmlError("expected '=' after the attribute name", pos);
      }
      ++pos;
      skip_ws();
      if (pos >= n || (document[pos] != '"' && document[pos] != '\'')) {
        throw XmlError("expected a quoted attribute value", pos);
      }
      char quote = document[pos];
      std::size_t value_begin = pos + 1;
      std::size_t close = document.find(quote, value_begin);
      if (close == std::string::npos) {
        throw XmlError("unterminated attribute value", pos);
      }
      out.push_back(Token{
          decode_entities(document.substr(value_begin, close - value_begin),
                          value_begin),
          SourceSpan{pos, close + 1}, klass(XmiTokenKind::kQuotedValue)});
      pos = close + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Terminal matching.

namespace {

std::string local_name(const std::string& qname) {
  std::size_t colon = qname.rfind(':');
  return colon == std::string::npos ? qname : qname.substr(colon + 1);
}

std::string strip_uml_prefix(const std::string& qname) {
  constexpr const char kPrefix[] = "uml:";
  if (qname.rfind(kPrefix, 0) == 0) return qname.substr(sizeof(kPrefix) - 1);
  return qname;
}

bool contains_whitespace(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  });
}

bool is_uri_shaped(const std::string& s) {
  return s.find("://") != std::string::npos ||
         s.find('#') != std::string::npos;
}

bool is_qname_shaped(const std::string& s) {
  if (s.empty() || !is_name_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_name_char);
}

bool is_reserved_attr_name(const std::string& name) {
  return name == "xmi:id" || name == "xmi:type" || name == "xmi:idref" ||
         name == "href" || name == "nil" || local_name(name) == "id";
}

std::vector<std::string> split_whitespace(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream stream(s);
  std::string part;
  while (stream >> part) parts.push_back(part);
  return parts;
}

}  // namespace

TerminalMatcher make_xmi_matcher(std::vector<std::string> ids) {
  auto id_set = std::make_shared<const std::set<std::string>>(ids.begin(),
                                                              ids.end());
  return [id_set](const Symbol& symbol, const Token& token) -> MatchResult {
    const auto kind = static_cast<XmiTokenKind>(token.klass);
    auto no = [] { return MatchResult{false, std::nullopt}; };
    auto yes = [] { return MatchResult{true, std::nullopt}; };

    if (symbol.kind == SymbolKind::kParamTerminal) {  // qualified name, "2k"
      if (kind == XmiTokenKind::kName ||
          (kind == XmiTokenKind::kQuotedValue &&
           is_qname_shaped(token.text))) {
        return MatchResult{true, strip_uml_prefix(token.text)};
      }
      return no();
    }

    const std::string& t = symbol.name;
    if (t == "<") return kind == XmiTokenKind::kAngleOpen ? yes() : no();
    if (t == ">") return kind == XmiTokenKind::kAngleClose ? yes() : no();
    if (t == "/>") return kind == XmiTokenKind::kSlashClose ? yes() : no();
    if (t == "</") {
      return kind == XmiTokenKind::kLiteral && token.text == "</" ? yes()
                                                                  : no();
    }
    if (t == "xmi:id" || t == "xmi:type" || t == "xmi:idref" || t == "href" ||
        t == "nil") {
      return kind == XmiTokenKind::kName && token.text == t ? yes() : no();
    }
    if (t == "true") {
      return kind == XmiTokenKind::kQuotedValue && token.text == "true"
                 ? yes()
                 : no();
    }
    if (t == "xmiIdAttribName") {
      return kind == XmiTokenKind::kName && token.text != "xmi:id" &&
                     local_name(token.text) == "id"
                 ? yes()
                 : no();
    }
    if (t == "attrName") {
      return kind == XmiTokenKind::kName && !is_reserved_attr_name(token.text)
                 ? yes()
                 : no();
    }
    if (t == "id") {
      return kind == XmiTokenKind::kQuotedValue ? yes() : no();
    }
    auto ref_shaped = [&](const std::string& value) {
      std::vector<std::string> parts = split_whitespace(value);
      if (parts.empty()) return false;
      return std::all_of(parts.begin(), parts.end(),
                         [&](const std::string& part) {
                           return id_set->count(part) != 0 ||
                                  is_uri_shaped(part);
                         });
    };
    if (t == "value") {
      if (kind == XmiTokenKind::kQuotedValue) {
        return ref_shaped(token.text) ? no() : yes();
      }
      return kind == XmiTokenKind::kLiteral && token.text != "</" ? yes()
                                                                  : no();
    }
    if (t == "refs") {
      return kind == XmiTokenKind::kQuotedValue && ref_shaped(token.text)
                 ? yes()
                 : no();
    }
    if (t == "refId") {
      return kind == XmiTokenKind::kQuotedValue && !token.text.empty() &&
                     !contains_whitespace(token.text)
                 ? yes()
                 : no();
    }
    if (t == "uriReference") {
      return kind == XmiTokenKind::kQuotedValue && is_uri_shaped(token.text)
                 ? yes()
                 : no();
    }
    return no();
  };
}

// ---------------------------------------------------------------------------
// Tree building.

const ModelElement::Attribute* ModelElement::find_attribute(
    const std::string& name) const {
  for (const Attribute& attr : attributes) {
    if (attr.name == name) return &attr;
  }
  return nullptr;
}

namespace {

// Element structure in terms of token indices, for canonical re-emission.
struct RawElement {
  std::size_t angle_open = 0;
  std::size_t name_tok = 0;
  struct RawAttr {
    std::size_t name_tok = 0;
    std::size_t value_tok = 0;
  };
  std::vector<RawAttr> attrs;
  bool self_closing = false;
  std::size_t open_end_tok = 0;  // "/>" or ">" of the opening tag
  std::optional<std::size_t> text_tok;
  std::vector<RawElement> children;
  // Closing-tag tokens, valid when !self_closing.
  std::size_t close_lit_tok = 0;
  std::size_t close_name_tok = 0;
  std::size_t close_end_tok = 0;
};

XmiTokenKind kind_of(const Token& token) {
  return static_cast<XmiTokenKind>(token.klass);
}

class TreeBuilder {
 public:
  explicit TreeBuilder(const std::vector<Token>& tokens) : tokens_(tokens) {}

  RawElement build_document() {
    if (tokens_.empty()) throw XmlError("empty document", 0);
    RawElement root = parse_element();
    if (pos_ != tokens_.size()) {
      throw XmlError("trailing content after the root element",
                     tokens_[pos_].span.start);
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::size_t offset = pos_ < tokens_.size()
                             ? tokens_[pos_].span.start
                             : (tokens_.empty() ? 0 : tokens_.back().span.end);
    throw XmlError(message, offset);
  }

  bool at(XmiTokenKind kind) const {
    return pos_ < tokens_.size() && kind_of(tokens_[pos_]) == kind;
  }

  bool at_close_literal() const {
    return at(XmiTokenKind::kLiteral) && tokens_[pos_].text == "</";
  }

  RawElement parse_element() {
    RawElement element;
    if (!at(XmiTokenKind::kAngleOpen)) fail("expected an element");
    element.angle_open = pos_++;
    if (!at(XmiTokenKind::kName)) fail("expected an element name");
    element.name_tok = pos_++;

    std::set<std::string> seen_attrs;
    while (at(XmiTokenKind::kName)) {
      RawElement::RawAttr attr;
      attr.name_tok = pos_++;
      if (!seen_attrs.insert(tokens_[attr.name_tok].text).second) {
        throw XmlError("duplicate attribute '" + tokens_[attr.name_tok].text +
                           "'",
                       tokens_[attr.name_tok].span.start);
      }
      if (!at(XmiTokenKind::kQuotedValue)) fail("expected an attribute value");
      attr.value_tok = pos_++;
      element.attrs.push_back(attr);
    }

    if (at(XmiTokenKind::kSlashClose)) {
      element.self_closing = true;
      element.open_end_tok = pos_++;
      return element;
    }
    if (!at(XmiTokenKind::kAngleClose)) fail("expected '>' or '/>'");
    element.open_end_tok = pos_++;

    while (!at_close_literal()) {
      if (at(XmiTokenKind::kAngleOpen)) {
        if (element.text_tok) {
          fail("mixed text and element content is not supported");
        }
        element.children.push_back(parse_element());
      } else if (at(XmiTokenKind::kLiteral)) {
        if (!element.children.empty() || element.text_tok) {
          fail("mixed text and element content is not supported");
        }
        element.text_tok = pos_++;
      } else {
        fail("expected child content or a closing tag");
      }
    }
    element.close_lit_tok = pos_++;
    if (!at(XmiTokenKind::kName)) fail("expected a name in the closing tag");
    if (tokens_[pos_].text != tokens_[element.name_tok].text) {
      throw XmlError("closing tag '" + tokens_[pos_].text +
                         "' does not match opening tag '" +
                         tokens_[element.name_tok].text + "'",
                     tokens_[pos_].span.start);
    }
    element.close_name_tok = pos_++;
    if (!at(XmiTokenKind::kAngleClose)) fail("expected '>'");
    element.close_end_tok = pos_++;
    return element;
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

ModelElement to_model(const RawElement& raw, const std::vector<Token>& tokens) {
  ModelElement element;
  element.qname = tokens[raw.name_tok].text;
  element.self_closing = raw.self_closing;
  element.span =
      SourceSpan{tokens[raw.angle_open].span.start,
                 raw.self_closing ? tokens[raw.open_end_tok].span.end
                                  : tokens[raw.close_end_tok].span.end};
  for (const RawElement::RawAttr& attr : raw.attrs) {
    ModelElement::Attribute out;
    out.name = tokens[attr.name_tok].text;
    out.value = tokens[attr.value_tok].text;
    out.name_span = tokens[attr.name_tok].span;
    out.value_span = tokens[attr.value_tok].span;
    if (out.name == "xmi:type") {
      element.xmi_type = out.value;
    } else if (out.name == "xmi:id" ||
               (!element.xmi_id && local_name(out.name) == "id")) {
      element.xmi_id = out.value;
    }
    element.attributes.push_back(std::move(out));
  }
  if (raw.text_tok) element.text = tokens[*raw.text_tok].text;
  for (const RawElement& child : raw.children) {
    element.children.push_back(to_model(child, tokens));
  }
  return element;
}

// Emits the element's tokens with attributes in the grammar's canonical
// order: xmi:type, then the identity attribute, then the rest as written.
void emit_canonical(const RawElement& raw, const std::vector<Token>& tokens,
                    std::vector<Token>& out) {
  out.push_back(tokens[raw.angle_open]);
  out.push_back(tokens[raw.name_tok]);

  std::vector<std::size_t> order;
  std::vector<bool> taken(raw.attrs.size(), false);
  auto take_first = [&](auto&& pred) {
    for (std::size_t i = 0; i < raw.attrs.size(); ++i) {
      if (!taken[i] && pred(tokens[raw.attrs[i].name_tok].text)) {
        taken[i] = true;
        order.push_back(i);
        return;
      }
    }
  };
  take_first([](const std::string& name) { return name == "xmi:type"; });
  take_first([](const std::string& name) { return name == "xmi:id"; });
  take_first([](const std::string& name) {
    return local_name(name) == "id" && name != "xmi:id";
  });
  for (std::size_t i = 0; i < raw.attrs.size(); ++i) {
    if (!taken[i]) order.push_back(i);
  }
  for (std::size_t i : order) {
    out.push_back(tokens[raw.attrs[i].name_tok]);
    out.push_back(tokens[raw.attrs[i].value_tok]);
  }

  out.push_back(tokens[raw.open_end_tok]);
  if (raw.self_closing) return;
  if (raw.text_tok) out.push_back(tokens[*raw.text_tok]);
  for (const RawElement& child : raw.children) {
    emit_canonical(child, tokens, out);
  }
  out.push_back(tokens[raw.close_lit_tok]);
  out.push_back(tokens[raw.close_name_tok]);
  out.push_back(tokens[raw.close_end_tok]);
}

void collect_ids(const ModelElement& element,
                 std::map<std::string, const ModelElement*>& ids) {
  if (element.xmi_id) {
    auto [it, inserted] = ids.emplace(*element.xmi_id, &element);
    if (!inserted) {
      throw XmlError("duplicate xmi:id '" + *element.xmi_id + "'",
                     element.span.start);
    }
  }
  for (const ModelElement& child : element.children) collect_ids(child, ids);
}

void collect_dangling_warnings(const ModelElement& element,
                               const std::set<std::string>& ids,
                               std::vector<std::string>& warnings) {
  for (const ModelElement::Attribute& attr : element.attributes) {
    if (attr.name != "xmi:idref" && attr.name != "general") continue;
    for (const std::string& part : split_whitespace(attr.value)) {
      if (ids.count(part) == 0 && !is_uri_shaped(part)) {
        warnings.push_back("dangling reference '" + part + "' in attribute '" +
                           attr.name + "' of element '" + element.qname +
                           "' at byte " +
                           std::to_string(attr.value_span.start));
      }
    }
  }
  for (const ModelElement& child : element.children) {
    collect_dangling_warnings(child, ids, warnings);
  }
}

std::optional<std::string> enclosing_id(const ModelElement& element,
                                        const SourceSpan& span,
                                        std::optional<std::string> inherited) {
  std::optional<std::string> own =
      element.xmi_id ? element.xmi_id : std::move(inherited);
  for (const ModelElement& child : element.children) {
    if (child.span.contains(span)) return enclosing_id(child, span, own);
  }
  return own;
}

}  // namespace

XmiParse parse_xmi(const std::vector<Token>& tokens) {
  TreeBuilder builder(tokens);
  RawElement raw = builder.build_document();

  XmiParse result;
  result.root = to_model(raw, tokens);

  std::map<std::string, const ModelElement*> id_elements;
  collect_ids(result.root, id_elements);
  std::vector<std::string> ids;
  ids.reserve(id_elements.size());
  for (const auto& [id, element] : id_elements) ids.push_back(id);
  collect_dangling_warnings(result.root,
                            std::set<std::string>(ids.begin(), ids.end()),
                            result.warnings);

  std::vector<Token> canonical;
  canonical.reserve(tokens.size());
  emit_canonical(raw, tokens, canonical);

  ParseOptions options;
  options.max_traces = 8;
  options.matcher = make_xmi_matcher(ids);
  ParseRun run = parse_traces_diagnosed(xmi_document_grammar(), canonical,
                                        options);
  if (run.traces.empty()) {
    std::size_t offset = run.progress < canonical.size()
                             ? canonical[run.progress].span.start
                             : canonical.back().span.end;
    throw XmlError("document is not derivable in the XMI document grammar",
                   offset);
  }
  if (run.traces.size() > 1) {
    result.warnings.push_back(
        "document has " + std::to_string(run.traces.size()) +
        " distinct derivations; using the first");
  }
  result.trace = std::move(run.traces.front());

  for (ProductionEvent& event : result.trace.events) {
    if (event.span && result.root.span.contains(*event.span)) {
      event.element_id = enclosing_id(result.root, *event.span, std::nullopt);
    }
  }
  return result;
}

XmiParse parse_xmi_text(const std::string& document) {
  return parse_xmi(tokenize_xmi(document));
}

// ---------------------------------------------------------------------------
// Activity-order normalization.

namespace {

bool type_local_is(const ModelElement& element, const char* name) {
  return element.xmi_type && local_name(*element.xmi_type) == name;
}

bool is_node_element(const ModelElement& element) {
  return local_name(element.qname) == "node";
}

std::string element_label(const ModelElement& element) {
  return element.xmi_id ? *element.xmi_id : element.qname;
}

}  // namespace

ModelElement normalize_activity_order(const ModelElement& tree,
                                      std::vector<std::string>* warnings) {
  ModelElement out = tree;
  out.children.clear();
  out.children.reserve(tree.children.size());
  for (const ModelElement& child : tree.children) {
    out.children.push_back(normalize_activity_order(child, warnings));
  }

  if (type_local_is(out, "Activity")) {
    // Pair the i-th fork with the i-th join (document order); reorder the
    // fork/join slots only when some pair is join-first.
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < out.children.size(); ++i) {
      const ModelElement& child = out.children[i];
      if (is_node_element(child) &&
          (type_local_is(child, "ForkNode") ||
           type_local_is(child, "JoinNode"))) {
        slots.push_back(i);
      }
    }
    std::vector<std::size_t> fork_pos;
    std::vector<std::size_t> join_pos;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (type_local_is(out.children[slots[k]], "ForkNode")) {
        fork_pos.push_back(k);
      } else {
        join_pos.push_back(k);
      }
    }
    if (fork_pos.size() != join_pos.size() && warnings != nullptr) {
      warnings->push_back(
          "activity '" + element_label(out) + "' has " +
          std::to_string(fork_pos.size()) + " fork node(s) and " +
          std::to_string(join_pos.size()) +
          " join node(s); fork/join pairing is best-effort");
    }
    bool ordered = true;
    for (std::size_t i = 0;
         i < std::min(fork_pos.size(), join_pos.size()); ++i) {
      if (fork_pos[i] > join_pos[i]) {
        ordered = false;
        break;
      }
    }
    if (!ordered) {
      std::vector<ModelElement> forks;
      std::vector<ModelElement> joins;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        ModelElement& item = out.children[slots[k]];
        (type_local_is(item, "ForkNode") ? forks : joins)
            .push_back(std::move(item));
      }
      std::size_t f = 0;
      std::size_t j = 0;
      for (std::size_t slot : slots) {
        if (j < joins.size() && j < f) {
          out.children[slot] = std::move(joins[j++]);
        } else if (f < forks.size()) {
          out.children[slot] = std::move(forks[f++]);
        } else {
          out.children[slot] = std::move(joins[j++]);
        }
      }
    }
  }

  if (is_node_element(out)) {
    // Incoming references come before outgoing ones.
    std::vector<std::size_t> slots;
    bool seen_outgoing = false;
    bool ordered = true;
    for (std::size_t i = 0; i < out.children.size(); ++i) {
      std::string local = local_name(out.children[i].qname);
      if (local == "incoming" || local == "outgoing") {
        slots.push_back(i);
        if (local == "outgoing") {
          seen_outgoing = true;
        } else if (seen_outgoing) {
          ordered = false;
        }
      }
    }
    if (!ordered) {
      std::vector<ModelElement> incoming;
      std::vector<ModelElement> outgoing;
      for (std::size_t slot : slots) {
        ModelElement& item = out.children[slot];
        (local_name(item.qname) == "incoming" ? incoming : outgoing)
            .push_back(std::move(item));
      }
      std::size_t next = 0;
      for (ModelElement& item : incoming) {
        out.children[slots[next++]] = std::move(item);
      }
      for (ModelElement& item : outgoing) {
        out.children[slots[next++]] = std::move(item);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

void write_element(const ModelElement& element, std::string& out, int indent) {
  out.append(static_cast<std::size_t>(indent), ' ');
  out += '<';
  out += element.qname;
  for (const ModelElement::Attribute& attr : element.attributes) {
    out += ' ';
    out += attr.name;
    out += "=\"";
    out += encode_entities(attr.value);
    out += '"';
  }
  if (element.self_closing) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (element.text) {
    out += encode_entities(*element.text);
  } else {
    out += '\n';
    for (const ModelElement& child : element.children) {
      write_element(child, out, indent + 2);
    }
    out.append(static_cast<std::size_t>(indent), ' ');
  }
  out += "</";
  out += element.qname;
  out += ">\n";
}

}  // namespace

std::string serialize(const ModelElement& tree) {
  std::string out;
  write_element(tree, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Element index.

ElementIndex::ElementIndex(const ModelElement& root) {
  index(root, nullptr);
}

void ElementIndex::index(const ModelElement& element,
                         const ModelElement* parent) {
  parents_[&element] = parent;
  if (element.xmi_id) by_id_.emplace(*element.xmi_id, &element);
  for (const ModelElement& child : element.children) index(child, &element);
}

const ModelElement* ElementIndex::by_id(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

const ModelElement* ElementIndex::parent(const ModelElement& element) const {
  auto it = parents_.find(&element);
  return it == parents_.end() ? nullptr : it->second;
}

std::optional<std::string> ElementIndex::display_name(
    const ModelElement& element) const {
  for (const ModelElement* e = &element; e != nullptr;) {
    if (const ModelElement::Attribute* attr = e->find_attribute("name")) {
      return attr->value;
    }
    auto it = parents_.find(e);
    e = it == parents_.end() ? nullptr : it->second;
  }
  return std::nullopt;
}

}  // namespace csys
